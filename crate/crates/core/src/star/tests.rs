use super::*;
use crate::backend::{obj, terminal};

fn fin(n: usize) -> Obj {
    obj(BackendKind::FinSet, n).unwrap()
}

fn ops(n: usize) -> Obj {
    obj(BackendKind::OpSet, n).unwrap()
}

fn disc() -> Sub {
    Sub::partition(vec![vec![0], vec![1]]).unwrap()
}

fn joined() -> Sub {
    Sub::partition(vec![vec![0, 1]]).unwrap()
}

fn sm(x: Obj, y: Obj, sub: Sub, flavor: Flavor) -> StarMor {
    StarMor::basis(x, y, sub, flavor).unwrap()
}

fn poly(coeffs: &[i64]) -> Poly {
    Poly::from_coeffs(coeffs.iter().map(|&c| c.into()).collect())
}

#[test]
fn r_set_counts() {
    assert_eq!(star_hom_dim(ops(1), ops(1)).unwrap(), 2);
    assert_eq!(star_hom_dim(ops(2), ops(2)).unwrap(), 7);
    assert_eq!(star_hom_dim(ops(2), ops(3)).unwrap(), 13);
    assert_eq!(star_hom_dim(fin(1), fin(1)).unwrap(), 1);
    // hom from the unit is one-dimensional
    for n in 1..=3 {
        assert_eq!(star_hom_dim(terminal(BackendKind::OpSet), ops(n)).unwrap(), 1);
        assert_eq!(star_hom_dim(ops(n), terminal(BackendKind::OpSet)).unwrap(), 1);
    }
    // independent counting oracle: sum_k C(m,k) C(n,k) k!
    fn expected(m: usize, n: usize) -> usize {
        fn binom(n: usize, k: usize) -> usize {
            if k > n {
                return 0;
            }
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        (0..=m.min(n))
            .map(|k| binom(m, k) * binom(n, k) * (1..=k.max(1)).product::<usize>())
            .sum()
    }
    for m in 0..=3 {
        for n in 0..=3 {
            assert_eq!(star_hom_dim(ops(m), ops(n)).unwrap(), expected(m, n));
        }
    }
}

#[test]
fn basis_validation() {
    // a matching of the two carriers is bi-surjective; putting two domain
    // points in one block is not
    assert!(StarMor::basis(ops(2), ops(2), Sub::partition(vec![vec![0, 2], vec![1, 3]]).unwrap(), Flavor::Curly).is_ok());
    assert!(StarMor::basis(ops(2), ops(2), Sub::partition(vec![vec![0, 1], vec![2, 3]]).unwrap(), Flavor::Curly).is_err());
}

#[test]
fn convert_examples() {
    let x = ops(1);
    // {disc} = (disc) + (joined)
    let curly_disc = sm(x, x, disc(), Flavor::Curly);
    let as_round = basis_convert(&curly_disc, Flavor::Round).unwrap();
    assert_eq!(as_round.coeff(&disc()), Poly::one());
    assert_eq!(as_round.coeff(&joined()), Poly::one());
    // (joined) = {joined}
    let round_joined = sm(x, x, joined(), Flavor::Round);
    let as_curly = basis_convert(&round_joined, Flavor::Curly).unwrap();
    assert_eq!(as_curly, sm(x, x, joined(), Flavor::Curly));
    // round trip is the identity on every basis element
    for (a, b) in [(ops(1), ops(2)), (ops(2), ops(2)), (fin(2), fin(2))] {
        for r in r_set(a, b).unwrap().iter() {
            for f in [Flavor::Round, Flavor::Curly] {
                let m = sm(a, b, r.sub.clone(), f);
                let other = if f == Flavor::Round { Flavor::Curly } else { Flavor::Round };
                let back = basis_convert(&basis_convert(&m, other).unwrap(), f).unwrap();
                assert_eq!(back, m);
            }
        }
    }
}

#[test]
fn embed_examples() {
    let d = DegreeFn::TPower;
    let x = ops(1);
    // the curly identity embeds as the top projector
    assert_eq!(
        embed(d, &StarMor::identity(x, Flavor::Curly)).unwrap(),
        p_star_top(&x).unwrap()
    );
    // embed((disc)) = <disc> - <joined>
    let e = embed(d, &sm(x, x, disc(), Flavor::Round)).unwrap();
    assert_eq!(e.coeff(&disc()), Poly::one());
    assert_eq!(e.coeff(&joined()), poly(&[-1]));
    assert_eq!(e.num_terms(), 2);
}

#[test]
fn project_embed_round_trip() {
    for (x, y, d) in [
        (ops(1), ops(1), DegreeFn::TPower),
        (ops(1), ops(2), DegreeFn::TPower),
        (ops(2), ops(2), DegreeFn::One),
        (fin(2), fin(2), DegreeFn::One),
    ] {
        for r in r_set(x, y).unwrap().iter() {
            let m = sm(x, y, r.sub.clone(), Flavor::Curly);
            assert_eq!(project(d, &embed(d, &m).unwrap(), x, y).unwrap(), m);
            // converting first must also survive the round trip
            let m_round = sm(x, y, r.sub.clone(), Flavor::Round);
            let back = project(d, &embed(d, &m_round).unwrap(), x, y).unwrap();
            assert_eq!(basis_convert(&back, Flavor::Round).unwrap().coeff(&r.sub), Poly::one());
        }
    }
}

#[test]
fn worked_round_composition() {
    let d = DegreeFn::TPower;
    let x = ops(1);
    let rd = |s: Sub| sm(x, x, s, Flavor::Round);
    // (disc)(disc) = (t-2)(disc) + (t-1)(joined)
    let got = compose_round(d, &rd(disc()), &rd(disc())).unwrap();
    assert_eq!(got.coeff(&disc()), poly(&[-2, 1]));
    assert_eq!(got.coeff(&joined()), poly(&[-1, 1]));
    assert_eq!(got.num_terms(), 2);
    // (joined)(joined) = (joined)
    let got = compose_round(d, &rd(joined()), &rd(joined())).unwrap();
    assert_eq!(got, rd(joined()));
    // the identity acts as the identity
    let id = StarMor::identity(x, Flavor::Round);
    for s in [disc(), joined()] {
        assert_eq!(compose_round(d, &id, &rd(s.clone())).unwrap(), rd(s.clone()));
        assert_eq!(compose_round(d, &rd(s.clone()), &id).unwrap(), rd(s));
    }
}

#[test]
fn worked_curly_composition() {
    let d = DegreeFn::TPower;
    let x = ops(1);
    let cu = |s: Sub| sm(x, x, s, Flavor::Curly);
    // {disc}{disc} = t {disc}
    let got = compose_curly(d, &cu(disc()), &cu(disc())).unwrap();
    assert_eq!(got, cu(disc()).scale_poly(&Poly::t()));
    // {joined}{joined} = {joined}
    assert_eq!(
        compose_curly(d, &cu(joined()), &cu(joined())).unwrap(),
        cu(joined())
    );
    // mixed products collapse onto {disc}
    assert_eq!(compose_curly(d, &cu(joined()), &cu(disc())).unwrap(), cu(disc()));
    assert_eq!(compose_curly(d, &cu(disc()), &cu(joined())).unwrap(), cu(disc()));
    // {diagonal} is the identity
    let id = StarMor::identity(x, Flavor::Curly);
    for s in [disc(), joined()] {
        assert_eq!(compose_curly(d, &id, &cu(s.clone())).unwrap(), cu(s.clone()));
        assert_eq!(compose_curly(d, &cu(s.clone()), &id).unwrap(), cu(s));
    }
}

#[test]
fn closed_forms_match_oracle_small() {
    // exhaustive agreement on one-point triples under every opset degree
    for d in DegreeFn::all_for(BackendKind::OpSet) {
        let x = ops(1);
        for r in r_set(x, x).unwrap().iter() {
            for s in r_set(x, x).unwrap().iter() {
                let rho_c = sm(x, x, r.sub.clone(), Flavor::Curly);
                let sig_c = sm(x, x, s.sub.clone(), Flavor::Curly);
                let oracle = compose_oracle(d, &sig_c, &rho_c).unwrap();
                // curly route
                assert_eq!(compose_curly(d, &sig_c, &rho_c).unwrap(), oracle);
                // round route
                let rho_r = basis_convert(&rho_c, Flavor::Round).unwrap();
                let sig_r = basis_convert(&sig_c, Flavor::Round).unwrap();
                let round = compose_round(d, &sig_r, &rho_r).unwrap();
                assert_eq!(basis_convert(&round, Flavor::Curly).unwrap(), oracle);
                // direct round expansion of the curly product
                let as_round = compose_curly_as_round(d, &sig_c, &rho_c).unwrap();
                assert_eq!(basis_convert(&as_round, Flavor::Curly).unwrap(), oracle);
            }
        }
    }
}

#[test]
fn conversion_intertwines_composition() {
    let d = DegreeFn::TPower;
    for (x, y, z) in [(ops(1), ops(1), ops(1)), (ops(1), ops(2), ops(1))] {
        for r in r_set(x, y).unwrap().iter() {
            for s in r_set(y, z).unwrap().iter() {
                let rho = sm(x, y, r.sub.clone(), Flavor::Curly);
                let sig = sm(y, z, s.sub.clone(), Flavor::Curly);
                let curly = compose_curly(d, &sig, &rho).unwrap();
                let round = compose_round(
                    d,
                    &basis_convert(&sig, Flavor::Round).unwrap(),
                    &basis_convert(&rho, Flavor::Round).unwrap(),
                )
                .unwrap();
                assert_eq!(basis_convert(&curly, Flavor::Round).unwrap(), round);
            }
        }
    }
}

#[test]
fn flavor_and_endpoint_errors() {
    let d = DegreeFn::TPower;
    let x = ops(1);
    let c = StarMor::identity(x, Flavor::Curly);
    let r = StarMor::identity(x, Flavor::Round);
    assert!(compose_round(d, &c, &r).is_err());
    assert!(compose_curly(d, &r, &c).is_err());
    let other = StarMor::identity(ops(2), Flavor::Curly);
    assert!(compose_curly(d, &other, &c).is_err());
}

#[test]
fn tensor_decomposition_counts() {
    // opset: [1]* tensor [1]* splits along joined (size-1) and disc (size-2)
    let parts = tensor_decompose(ops(1), ops(1)).unwrap();
    assert_eq!(parts.len(), 2);
    // canonical label order puts the discrete relation (size-2 summand)
    // before the joined one (size-1 summand)
    let sizes: Vec<usize> = parts
        .iter()
        .map(|(r, _)| sub_object(&r.xy(), &r.sub).unwrap().size)
        .collect();
    assert_eq!(sizes, vec![2, 1]);
    // finset: a single summand
    assert_eq!(tensor_decompose(fin(1), fin(1)).unwrap().len(), 1);
    assert_eq!(tensor_decompose(fin(2), fin(2)).unwrap().len(), 7);
    // unit law: tensoring with the terminal object gives a single summand
    assert_eq!(tensor_decompose(ops(2), terminal(BackendKind::OpSet)).unwrap().len(), 1);
    assert_eq!(tensor_decompose(fin(2), terminal(BackendKind::FinSet)).unwrap().len(), 1);
}

#[test]
fn self_duality_count() {
    // |R(x,y)| equals the number of unit-hom dimensions across the summands
    for (x, y) in [(ops(1), ops(1)), (ops(1), ops(2)), (ops(2), ops(2)), (fin(2), fin(2))] {
        let parts = tensor_decompose(x, y).unwrap();
        let unit = terminal(x.kind);
        let total: usize = parts
            .iter()
            .map(|(r, _)| star_hom_dim(unit, sub_object(&r.xy(), &r.sub).unwrap()).unwrap())
            .sum();
        assert_eq!(total, star_hom_dim(x, y).unwrap());
    }
}

#[test]
fn multi_decomposition() {
    // three one-point factors: all five partitions of three points qualify
    let parts = multi_tensor_decompose(&[ops(1), ops(1), ops(1)]).unwrap();
    assert_eq!(parts.len(), 5);
    // pair case reduces to the binary decomposition
    let pair = multi_tensor_decompose(&[ops(1), ops(1)]).unwrap();
    let binary = tensor_decompose(ops(1), ops(1)).unwrap();
    assert_eq!(pair.len(), binary.len());
    for ((s, _), (r, _)) in pair.iter().zip(binary.iter()) {
        assert_eq!(s, &r.sub);
    }
}

#[test]
fn assoc_and_comm_constraints() {
    for (x, y, z) in [(ops(1), ops(1), ops(1)), (ops(1), ops(2), ops(1)), (fin(2), fin(2), fin(2))] {
        let a = assoc_constraint(x, y, z).unwrap();
        assert_eq!(a.left.len(), a.flat.len());
        assert_eq!(a.right.len(), a.flat.len());
    }
    for (x, y) in [(ops(1), ops(2)), (ops(2), ops(2)), (fin(2), fin(3))] {
        let fwd = comm_constraint(x, y).unwrap();
        let bwd = comm_constraint(y, x).unwrap();
        // applying the swap twice is the identity
        for (r, s) in &fwd {
            let (s2, r2) = bwd.iter().find(|(a, _)| a == s).unwrap();
            assert_eq!(s2, s);
            assert_eq!(r2, r);
        }
    }
}

#[test]
fn tree_summands_match_flat_decomposition() {
    let (x, y, z) = (ops(1), ops(1), ops(1));
    let left = TensorTree::node(
        TensorTree::node(TensorTree::leaf(x), TensorTree::leaf(y)),
        TensorTree::leaf(z),
    );
    let right = TensorTree::node(
        TensorTree::leaf(x),
        TensorTree::node(TensorTree::leaf(y), TensorTree::leaf(z)),
    );
    let flat: Vec<Sub> = multi_tensor_decompose(&[x, y, z])
        .unwrap()
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    assert_eq!(left.summands().unwrap(), flat);
    assert_eq!(right.summands().unwrap(), flat);
}

#[test]
fn identity_tensor_blocks() {
    let d = DegreeFn::TPower;
    let x = ops(1);
    // id tensor id in the round basis: diagonal identity blocks
    let id_r = StarMor::identity(x, Flavor::Round);
    let map = tensor_round(&id_r, &id_r).unwrap();
    for (i, u) in map.src.iter().enumerate() {
        for (j, _) in map.dst.iter().enumerate() {
            let expect = if i == j {
                let uo = sub_object(&product(x, x).unwrap(), u).unwrap();
                StarMor::identity(uo, Flavor::Round)
            } else {
                StarMor::zero(map.blocks[i][j].x, map.blocks[i][j].y, Flavor::Round)
            };
            assert_eq!(map.blocks[i][j], expect);
        }
    }
    // same in the curly basis
    let id_c = StarMor::identity(x, Flavor::Curly);
    let map = tensor_curly(d, &id_c, &id_c).unwrap();
    for i in 0..map.src.len() {
        for j in 0..map.dst.len() {
            if i == j {
                assert_eq!(
                    map.blocks[i][j],
                    StarMor::identity(map.blocks[i][j].x, Flavor::Curly)
                );
            } else {
                assert!(map.blocks[i][j].is_zero());
            }
        }
    }
}

#[test]
fn tensor_routes_match_oracle_small() {
    // exhaustive over one-point opset quadruples, all degree functions
    for d in DegreeFn::all_for(BackendKind::OpSet) {
        let x = ops(1);
        let rels: Vec<Sub> = r_set(x, x).unwrap().iter().map(|r| r.sub.clone()).collect();
        for r in &rels {
            for r2 in &rels {
                let rho_c = sm(x, x, r.clone(), Flavor::Curly);
                let rho2_c = sm(x, x, r2.clone(), Flavor::Curly);
                let oracle = tensor_oracle(d, &rho_c, &rho2_c).unwrap();
                let curly = tensor_curly(d, &rho_c, &rho2_c).unwrap();
                assert!(curly.agrees_with(&oracle, Flavor::Curly).unwrap());
                let rho_r = basis_convert(&rho_c, Flavor::Round).unwrap();
                let rho2_r = basis_convert(&rho2_c, Flavor::Round).unwrap();
                let round = tensor_round(&rho_r, &rho2_r).unwrap();
                let oracle_r = tensor_oracle(d, &rho_r, &rho2_r).unwrap();
                assert!(round.agrees_with(&oracle_r, Flavor::Curly).unwrap());
            }
        }
    }
}

#[test]
fn starmor_json_shape() {
    let m = sm(ops(1), ops(1), disc(), Flavor::Curly);
    assert_eq!(
        m.to_json().to_string(),
        r#"{"flavor":"curly","terms":[{"poly":[1],"rel":[[0],[1]]}],"x":{"backend":"opset","size":1},"y":{"backend":"opset","size":1}}"#
    );
}
