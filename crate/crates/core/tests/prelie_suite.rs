use kapranov::fixtures::{gerstenhaber_truncated, vector_fields_theta, w4_theta};
use kapranov::linfty::find_splitting;
use kapranov::prelie::{
    kapranov, kapranov_splitting, verify_compact_recursion, verify_compact_recursion_with, verify_lie_morphism,
    Chirality, PreLieAlgebra, TowerVariant,
};
use kapranov::scalar::{int, sign};
use kapranov::{GradedSpace, SymMap, TensorMap, Vector};

fn gen(l: &PreLieAlgebra, name: &str) -> usize {
    l.space().index_of(name).unwrap()
}

fn exterior() -> PreLieAlgebra {
    let sp = GradedSpace::new([("one", 0), ("t", 1)]).unwrap().arc();
    let mut p = TensorMap::on(&sp, 2, 0);
    p.set(&[0, 0], Vector::basis(0)).unwrap();
    p.set(&[0, 1], Vector::basis(1)).unwrap();
    p.set(&[1, 0], Vector::basis(1)).unwrap();
    PreLieAlgebra::new(&sp, Chirality::Left, p, None).unwrap()
}

#[test]
fn associative_products_are_prelie() {
    assert!(exterior().check_prelie().passed());
    assert!(exterior().associated_bracket().unwrap().is_zero());
}

#[test]
fn perturbed_fixture_fails_with_a_triple() {
    let l = w4_theta();
    let mut p = l.product().clone();
    p.add(&[gen(&l, "e1"), gen(&l, "e1")], &Vector::basis(gen(&l, "e2"))).unwrap();
    let bad = PreLieAlgebra::new(l.space(), Chirality::Left, p, None).unwrap();
    let rep = bad.check_prelie();
    assert!(!rep.passed());
    assert!(!rep.associator_failures.is_empty());
}

#[test]
fn bracket_values() {
    let l = w4_theta();
    let br = l.associated_bracket().unwrap();
    assert_eq!(br.eval(&[gen(&l, "e1"), gen(&l, "e2")]).unwrap(), Vector::basis(gen(&l, "e2")));
    for u in ["e1t", "e2t", "e3t"] {
        assert!(br.eval(&[gen(&l, u), gen(&l, u)]).unwrap().is_zero());
    }
    let sp = l.space().clone();
    let zero = PreLieAlgebra::new(&sp, Chirality::Left, TensorMap::on(&sp, 2, 0), None).unwrap();
    assert!(zero.associated_bracket().unwrap().is_zero());
}

#[test]
fn nabla_is_a_lie_morphism() {
    let l = w4_theta();
    let sp = l.space().clone();
    let br = l.associated_bracket().unwrap();
    let nab = |v: &Vector, k: i64| l.nabla(v, k).unwrap();
    for x in 0..sp.dim() {
        for y in 0..sp.dim() {
            let (kx, ky) = (sp.degree(x), sp.degree(y));
            let (nx, ny) = (nab(&Vector::basis(x), kx), nab(&Vector::basis(y), ky));
            let mut lhs = nx.compose_linear(&ny);
            lhs.add_scaled(&ny.compose_linear(&nx), &-sign(kx * ky)).unwrap();
            let rhs = nab(&br.eval(&[x, y]).unwrap(), kx + ky);
            assert_eq!(lhs, rhs, "({x}, {y})");
        }
    }
}

#[test]
fn right_to_left_keeps_the_bracket() {
    let w = GradedSpace::new([("w", 0), ("u", 1)]).unwrap().arc();
    let g = gerstenhaber_truncated(&w, 2).unwrap();
    assert_eq!(g.chirality(), Chirality::Right);
    let l = g.right_to_left().unwrap();
    assert!(l.check_prelie().passed());
    assert_eq!(g.associated_bracket().unwrap(), l.associated_bracket().unwrap());

    let even = GradedSpace::new([("w", 0)]).unwrap().arc();
    let g = gerstenhaber_truncated(&even, 3).unwrap();
    let l = g.right_to_left().unwrap();
    for x in 0..g.space().dim() {
        for y in 0..g.space().dim() {
            let right = g.product().eval(&[y, x]).unwrap();
            assert_eq!(l.product().eval(&[x, y]).unwrap(), right.scaled(&int(-1)));
        }
    }
}

#[test]
fn derivation_reports() {
    let l = w4_theta();
    let sp = l.space().clone();
    let zero = l.check_derivation(&SymMap::on(&sp, 1, 1)).unwrap();
    assert!(zero.passed() && zero.is_product_derivation());

    let d = l.differential().unwrap();
    let rep = l.check_derivation(d).unwrap();
    assert!(rep.passed() && !rep.is_product_derivation());
    let e2 = gen(&l, "e2");
    assert!(rep.product_failures.contains(&(e2, e2)));

    let abc = GradedSpace::new([("a", 0), ("b", 1), ("c", 2)]).unwrap().arc();
    let flat = PreLieAlgebra::new(&abc, Chirality::Left, TensorMap::on(&abc, 2, 0), None).unwrap();
    let mut bad = SymMap::on(&abc, 1, 1);
    bad.set(&[0], Vector::basis(1)).unwrap();
    bad.set(&[1], Vector::basis(2)).unwrap();
    let rep = flat.check_derivation(&bad).unwrap();
    assert!(rep.is_bracket_derivation() && !rep.squares_to_zero && !rep.passed());
}

/// `dx ▷ y + (-1)^{|x||d|} x ▷ dy - d(x ▷ y)`, computed from the product
/// alone.
fn leibniz_defect(l: &PreLieAlgebra, d: &SymMap, x: usize, y: usize) -> Vector {
    let sp = l.space();
    let (vx, vy) = (Vector::basis(x), Vector::basis(y));
    let mut v = l.mul(&d.apply(&vx), &vy);
    v.add_scaled(&l.mul(&vx, &d.apply(&vy)), &sign(sp.degree(x) * d.degree()));
    v.add_scaled(&d.apply(&l.mul(&vx, &vy)), &int(-1));
    v
}

#[test]
fn phi2_is_the_leibniz_defect() {
    let l = vector_fields_theta(5);
    let sp = l.space().clone();
    for name in ["e2t", "e3t", "e1", "e2"] {
        let d = l.ad(gen(&l, name)).unwrap();
        let t = kapranov(&l, &d, 2, TowerVariant::Plain).unwrap();
        for x in 0..sp.dim() {
            for y in 0..sp.dim() {
                let defect = leibniz_defect(&l, &d, x, y);
                let swapped = leibniz_defect(&l, &d, y, x).scaled(&sign(sp.degree(x) * sp.degree(y)));
                assert_eq!(defect, swapped, "{name}: defect not symmetric on ({x}, {y})");
                assert_eq!(t.coefficient(2).eval(&[x, y]).unwrap(), defect, "{name}: ({x}, {y})");
            }
        }
    }
}

#[test]
fn trivial_towers() {
    let l = w4_theta();
    let sp = l.space().clone();
    let d = l.ad(gen(&l, "e1t")).unwrap();
    assert!(l.check_derivation(&d).unwrap().is_product_derivation());
    let t = kapranov(&l, &d, 4, TowerVariant::Plain).unwrap();
    assert!((2..=4).all(|n| t.coefficient(n).is_zero()));
    let t = kapranov(&l, &SymMap::on(&sp, 1, 1), 4, TowerVariant::Plain).unwrap();
    assert!(t.coder.is_zero());
    let flat = PreLieAlgebra::new(&sp, Chirality::Left, TensorMap::on(&sp, 2, 0), None).unwrap();
    let mut d = SymMap::on(&sp, 1, 1);
    d.set(&[gen(&l, "e1")], Vector::basis(gen(&l, "e2t"))).unwrap();
    let t = kapranov(&flat, &d, 4, TowerVariant::Plain).unwrap();
    assert!((2..=4).all(|n| t.coefficient(n).is_zero()));
}

fn fixture_towers() -> Vec<(PreLieAlgebra, SymMap, usize)> {
    let mut out = Vec::new();
    let l = w4_theta();
    for name in ["e2t", "e3t", "e1", "e2"] {
        let d = l.ad(gen(&l, name)).unwrap();
        out.push((l.clone(), d, 4));
    }
    let w = GradedSpace::new([("w", 0), ("u", 1)]).unwrap().arc();
    let g = gerstenhaber_truncated(&w, 3).unwrap();
    let d = g.ad(gen(&g, "w.w->u")).unwrap();
    out.push((g, d, 3));
    out
}

#[test]
fn alternating_tower_is_the_sign_twist() {
    for (l, d, n) in fixture_towers() {
        let plain = kapranov(&l, &d, n, TowerVariant::Plain).unwrap();
        let alt = kapranov(&l, &d, n, TowerVariant::Alternating).unwrap();
        assert_eq!(alt.coder, plain.coder.alternate_signs());
        assert!(verify_compact_recursion(&l, &alt).unwrap().passed());
    }
}

#[test]
fn wrong_witness_sign_is_detected() {
    let l = w4_theta();
    let t = kapranov(&l, l.differential().unwrap(), 4, TowerVariant::Plain).unwrap();
    let rep = verify_compact_recursion_with(&l, &t, TowerVariant::Alternating).unwrap();
    assert!(!rep.passed());
    assert!(rep.failures.iter().all(|&(_, a)| a >= 1));
}

#[test]
fn right_input_matches_converted_input() {
    let w = GradedSpace::new([("w", 0), ("u", 1)]).unwrap().arc();
    let g = gerstenhaber_truncated(&w, 2).unwrap();
    let d = g.ad(gen(&g, "w.w->u")).unwrap();
    let a = kapranov(&g, &d, 3, TowerVariant::Plain).unwrap();
    let b = kapranov(&g.right_to_left().unwrap(), &d, 3, TowerVariant::Plain).unwrap();
    assert_eq!(a, b);
}

#[test]
fn lie_morphism_trivial_cases() {
    let l = w4_theta();
    let d = l.differential().unwrap();
    assert!(verify_lie_morphism(&l, d, d, 4).unwrap().passed());
    assert!(verify_lie_morphism(&l, d, &SymMap::on(l.space(), 1, 0), 4).unwrap().passed());
    let e1 = l.ad(gen(&l, "e1")).unwrap();
    let e2 = l.ad(gen(&l, "e2")).unwrap();
    assert!(verify_lie_morphism(&l, &e1, &e2, 4).unwrap().passed());
}

#[test]
fn corrupted_tower_fails_the_witness_check() {
    let l = w4_theta();
    let t = kapranov(&l, l.differential().unwrap(), 4, TowerVariant::Plain).unwrap();
    assert!(find_splitting(&t.coder, 4).unwrap().is_feasible());
    let mut bad = t.clone();
    bad.coder.set_coefficient(t.coefficient(2).scaled(&int(2))).unwrap();
    let w = kapranov_splitting(&l, &bad).unwrap();
    assert!(!w.check.passed());
    assert!(w.check.dg_failures.iter().all(|&(_, a)| a == 1));
}
