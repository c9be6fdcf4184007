//! OpSet-specific internals.  Everything here manipulates the underlying set
//! maps, which run opposite to the categorical arrows: pullbacks are pushouts
//! of carriers, images are fiber partitions of the codomain carrier.

use super::{Mor, Obj, Span, Sub, UnionFind};

pub(super) fn image(f: &Mor) -> (Mor, Sub) {
    // fibers of the underlying map carrier(cod) -> carrier(dom)
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (c, &v) in f.raw_table().iter().enumerate() {
        groups.entry(v).or_default().push(c);
    }
    let mut blocks: Vec<(usize, Vec<usize>)> = groups.into_iter().collect();
    blocks.sort_by_key(|(_, b)| b[0]);
    let mid = Obj {
        kind: f.dom.kind,
        size: blocks.len(),
    };
    // e : dom ->> mid is stored as the injective map carrier(mid) -> carrier(dom)
    let e = Mor {
        dom: f.dom,
        cod: mid,
        table: blocks.iter().map(|(v, _)| *v).collect(),
    };
    (e, Sub::Partition(blocks.into_iter().map(|(_, b)| b).collect()))
}

pub(super) fn preimage(f: &Mor, z: &Sub) -> Sub {
    let Sub::Partition(blocks) = z else { unreachable!() };
    let mut uf = UnionFind::new(f.dom.size);
    for block in blocks {
        for w in block.windows(2) {
            uf.union(f.raw_table()[w[0]], f.raw_table()[w[1]]);
        }
    }
    uf.into_partition()
}

pub(super) fn pullback(f: &Mor, g: &Mor) -> Span {
    // push-out of the carrier maps over the shared codomain carrier
    let (nx, ny) = (f.dom.size, g.dom.size);
    let mut uf = UnionFind::new(nx + ny);
    for c in 0..f.cod.size {
        uf.union(f.raw_table()[c], nx + g.raw_table()[c]);
    }
    let (classes, table) = uf.class_table();
    let apex = Obj {
        kind: f.dom.kind,
        size: classes,
    };
    Span {
        apex,
        left: Mor {
            dom: apex,
            cod: f.dom,
            table: table[..nx].to_vec(),
        },
        right: Mor {
            dom: apex,
            cod: g.dom,
            table: table[nx..].to_vec(),
        },
    }
}

/// All partitions of `0..n` via restricted growth strings; blocks come out
/// canonically ordered.
pub(super) fn all_partitions(n: usize) -> Vec<Sub> {
    if n == 0 {
        return vec![Sub::Partition(Vec::new())];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go(rgs: &mut Vec<usize>, i: usize, maxused: usize, n: usize, out: &mut Vec<Sub>) {
        if i == n {
            let blocks_count = maxused + 1;
            let mut blocks = vec![Vec::new(); blocks_count];
            for (e, &b) in rgs.iter().enumerate() {
                blocks[b].push(e);
            }
            out.push(Sub::Partition(blocks));
            return;
        }
        for b in 0..=maxused + 1 {
            rgs[i] = b;
            go(rgs, i + 1, maxused.max(b), n, out);
        }
    }
    // first element is always in block 0
    go(&mut rgs, 1, 0, n, &mut out);
    out
}
