//! FinSet-specific internals: plain map combinatorics.

use super::{Mor, Obj, Span, Sub};

pub(super) fn image(f: &Mor) -> (Mor, Sub) {
    let mut img: Vec<usize> = f.raw_table().to_vec();
    img.sort_unstable();
    img.dedup();
    let rank: std::collections::HashMap<usize, usize> =
        img.iter().enumerate().map(|(r, &v)| (v, r)).collect();
    let dom = f.dom;
    let mid = Obj {
        kind: dom.kind,
        size: img.len(),
    };
    let e = Mor {
        dom,
        cod: mid,
        table: f.raw_table().iter().map(|v| rank[v]).collect(),
    };
    (e, Sub::Subset(img))
}

pub(super) fn preimage(f: &Mor, z: &Sub) -> Option<Sub> {
    let Sub::Subset(zs) = z else { unreachable!() };
    let hits: Vec<usize> = f
        .raw_table()
        .iter()
        .enumerate()
        .filter(|(_, v)| zs.binary_search(v).is_ok())
        .map(|(i, _)| i)
        .collect();
    if hits.is_empty() {
        None
    } else {
        Some(Sub::Subset(hits))
    }
}

pub(super) fn pullback(f: &Mor, g: &Mor) -> Option<Span> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (a, &fa) in f.raw_table().iter().enumerate() {
        for (b, &gb) in g.raw_table().iter().enumerate() {
            if fa == gb {
                left.push(a);
                right.push(b);
            }
        }
    }
    if left.is_empty() {
        return None;
    }
    let apex = Obj {
        kind: f.dom.kind,
        size: left.len(),
    };
    Some(Span {
        apex,
        left: Mor {
            dom: apex,
            cod: f.dom,
            table: left,
        },
        right: Mor {
            dom: apex,
            cod: g.dom,
            table: right,
        },
    })
}

pub(super) fn all_subsets(n: usize) -> Vec<Sub> {
    (1usize..(1 << n))
        .map(|mask| Sub::Subset((0..n).filter(|i| mask >> i & 1 == 1).collect()))
        .collect()
}
