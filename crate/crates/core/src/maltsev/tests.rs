use super::*;
use crate::backend::obj;
use crate::star::{basis_convert, compose_curly, r_set, star_hom_dim};

fn ops(n: usize) -> Obj {
    obj(BackendKind::OpSet, n).unwrap()
}

fn fin(n: usize) -> Obj {
    obj(BackendKind::FinSet, n).unwrap()
}

#[test]
fn finset_is_rejected() {
    assert!(CoRel::empty(fin(1), fin(1)).is_err());
    let r = Rel::new(fin(1), fin(1), Sub::subset(vec![0]).unwrap()).unwrap();
    assert!(pull_push(&r).is_err());
    assert!(corel_set(fin(2), fin(2)).is_err());
    assert!(quot_lattice(fin(2), fin(2)).is_err());
    assert!(maltsev_witness(DegreeFn::One, fin(2)).is_err());
}

#[test]
fn corel_counts() {
    assert_eq!(corel_set(ops(1), ops(1)).unwrap().len(), 2);
    assert_eq!(corel_set(ops(2), ops(2)).unwrap().len(), 7);
    assert_eq!(corel_set(ops(2), ops(3)).unwrap().len(), 13);
    // gluings with the terminal object: only the empty one
    assert_eq!(corel_set(ops(3), ops(0)).unwrap().len(), 1);
    // counts always match the relation-basis dimension
    for m in 0..=3 {
        for n in 0..=3 {
            assert_eq!(
                corel_set(ops(m), ops(n)).unwrap().len(),
                star_hom_dim(ops(m), ops(n)).unwrap()
            );
        }
    }
}

#[test]
fn push_pull_examples() {
    // empty gluing -> discrete partition (the top relation)
    let e = CoRel::empty(ops(2), ops(1)).unwrap();
    assert_eq!(
        push_pull(&e).unwrap().sub,
        Sub::partition(vec![vec![0], vec![1], vec![2]]).unwrap()
    );
    // full gluing on one-point carriers -> joined partition
    let full = CoRel::new(ops(1), ops(1), vec![(0, 0)]).unwrap();
    assert_eq!(
        push_pull(&full).unwrap().sub,
        Sub::partition(vec![vec![0, 1]]).unwrap()
    );
}

#[test]
fn push_pull_round_trips() {
    for m in 0..=2usize {
        for n in 0..=2usize {
            let (x, y) = (ops(m), ops(n));
            // corel -> rel -> corel
            for u in corel_set(x, y).unwrap() {
                let r = push_pull(&u).unwrap();
                assert!(r.is_biepi().unwrap());
                assert_eq!(pull_push(&r).unwrap(), u);
            }
            // rel -> corel -> rel
            for r in r_set(x, y).unwrap().iter() {
                assert_eq!(&push_pull(&pull_push(r).unwrap()).unwrap(), r);
            }
        }
    }
}

#[test]
fn push_pull_is_order_preserving() {
    let (x, y) = (ops(2), ops(2));
    let corels = corel_set(x, y).unwrap();
    for u in &corels {
        for v in &corels {
            let ru = push_pull(u).unwrap();
            let rv = push_pull(v).unwrap();
            assert_eq!(
                corel_leq(u, v),
                crate::backend::sub_leq(&ru.sub, &rv.sub),
                "order mismatch at {u:?}, {v:?}"
            );
        }
    }
}

#[test]
fn quot_lattice_top_is_empty_gluing() {
    let l = quot_lattice(ops(2), ops(2)).unwrap();
    assert_eq!(l.top(), &CoRel::empty(ops(2), ops(2)).unwrap());
    l.check_poset_axioms().unwrap();
}

#[test]
fn curly_prime_examples() {
    // the empty gluing gives the top relation's basis element
    let e = CoRel::empty(ops(1), ops(1)).unwrap();
    assert_eq!(
        curly_prime(&e).unwrap(),
        StarMor::basis(
            ops(1),
            ops(1),
            Sub::partition(vec![vec![0], vec![1]]).unwrap(),
            Flavor::Curly
        )
        .unwrap()
    );
    // the full gluing gives the joined basis element
    let full = CoRel::new(ops(1), ops(1), vec![(0, 0)]).unwrap();
    assert_eq!(
        curly_prime(&full).unwrap(),
        StarMor::basis(
            ops(1),
            ops(1),
            Sub::partition(vec![vec![0, 1]]).unwrap(),
            Flavor::Curly
        )
        .unwrap()
    );
}

#[test]
fn curly_prime_matches_generator_word() {
    for d in [DegreeFn::TPower, DegreeFn::One] {
        for (m, n) in [(1, 1), (1, 2), (2, 2)] {
            for u in corel_set(ops(m), ops(n)).unwrap() {
                assert_eq!(
                    curly_prime(&u).unwrap(),
                    curly_prime_via_word(d, &u).unwrap(),
                    "word route disagrees at {u:?}"
                );
            }
        }
    }
}

#[test]
fn curly_prime_round_expansion() {
    // in the round basis, a cospan's morphism is the plain sum of the
    // pullback relations of everything below it
    for (m, n) in [(1, 1), (2, 1), (2, 2)] {
        let (x, y) = (ops(m), ops(n));
        let corels = corel_set(x, y).unwrap();
        for u in &corels {
            let as_round = basis_convert(&curly_prime(u).unwrap(), Flavor::Round).unwrap();
            let mut expect = StarMor::zero(x, y, Flavor::Round);
            for t in &corels {
                if corel_leq(t, u) {
                    expect.add_term(&push_pull(t).unwrap().sub, Poly::one());
                }
            }
            assert_eq!(as_round, expect);
        }
    }
}

#[test]
fn worked_gluing_products() {
    let d = DegreeFn::TPower;
    let x = ops(1);
    let empty = CoRel::empty(x, x).unwrap();
    let full = CoRel::new(x, x, vec![(0, 0)]).unwrap();
    let disc = Sub::partition(vec![vec![0], vec![1]]).unwrap();
    let joined = Sub::partition(vec![vec![0, 1]]).unwrap();
    // {disc}'{disc}' = t {disc}
    assert_eq!(
        malcev_compose(d, &empty, &empty).unwrap(),
        StarMor::basis(x, x, disc, Flavor::Curly)
            .unwrap()
            .scale_poly(&Poly::t())
    );
    // {joined}'{joined}' = {joined}
    assert_eq!(
        malcev_compose(d, &full, &full).unwrap(),
        StarMor::basis(x, x, joined, Flavor::Curly).unwrap()
    );
}

#[test]
fn gluing_product_matches_curly_composition() {
    // exhaustive agreement with the curly product on small triples
    let d = DegreeFn::TPower;
    for (a, b, c) in [(1, 1, 1), (1, 2, 1), (2, 1, 2), (1, 1, 2)] {
        let (x, y, z) = (ops(a), ops(b), ops(c));
        for u in corel_set(x, y).unwrap() {
            for v in corel_set(y, z).unwrap() {
                let direct = malcev_compose(d, &v, &u).unwrap();
                let via_curly =
                    compose_curly(d, &curly_prime(&v).unwrap(), &curly_prime(&u).unwrap())
                        .unwrap();
                assert_eq!(direct, via_curly, "mismatch at u={u:?} v={v:?}");
            }
        }
    }
}

#[test]
fn witnesses_hold_on_small_objects() {
    for n in 0..=3 {
        maltsev_witness(DegreeFn::TPower, ops(n)).unwrap();
        exactness_witness(DegreeFn::TPower, ops(n)).unwrap();
    }
}

#[test]
fn gluing_text_form() {
    let u = CoRel::parse(ops(2), ops(2), "{x0:[0],y0:[1],bij:[[0,1]]}").unwrap();
    assert_eq!(u.pairs(), &[(0, 1)]);
    assert_eq!(
        u.to_json().to_string(),
        r#"{"bij":[[0,1]],"x0":[0],"y0":[1]}"#
    );
    // quoted keys work too, and inconsistent sides are rejected
    assert!(CoRel::parse(ops(2), ops(2), r#"{"bij":[[0,1],[1,0]]}"#).is_ok());
    assert!(CoRel::parse(ops(2), ops(2), "{x0:[1],y0:[1],bij:[[0,1]]}").is_err());
    assert!(CoRel::parse(ops(2), ops(2), "{bij:[[0,1],[0,0]]}").is_err());
}
