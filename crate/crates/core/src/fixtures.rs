//! Fixture algebras and random instances. Every fixture is built from its
//! defining formulas; none of its properties are assumed, the test suites
//! re-verify them.

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::coalgebra::{gerstenhaber_product, CoalgebraMorphism, Coderivation, Variant};
use crate::error::Result;
use crate::linalg::{coordinates, SparseVec};
use crate::linfty::Dgla;
use crate::maps::{AltMap, SymMap, TensorMap};
use crate::prelie::{Chirality, PreLieAlgebra};
use crate::scalar::{int, ratio, sign, Scalar};
use crate::space::GradedSpace;
use crate::vector::Vector;

/// Truncated polynomial vector fields `W_n = span{e_1..e_n}`,
/// `e_i ▷ e_j = j e_{i+j-1}` (zero past `n`), tensored with the exterior
/// algebra on one odd generator `θ`. Generators are `e1..en` (degree 0)
/// followed by `e1t..ent` (`e_i ⊗ θ`, degree 1). No differential.
pub fn vector_fields_theta(n: usize) -> PreLieAlgebra {
    let names = (1..=n).map(|i| (format!("e{i}"), 0)).chain((1..=n).map(|i| (format!("e{i}t"), 1)));
    let sp = GradedSpace::new(names).expect("distinct names").arc();
    let mut p = TensorMap::on(&sp, 2, 0);
    for a in 0..2 {
        for b in 0..2 {
            if a + b > 1 {
                continue;
            }
            for i in 1..=n {
                for j in 1..=n {
                    let k = i + j - 1;
                    if k > n {
                        continue;
                    }
                    let g = |idx: usize, t: usize| idx - 1 + t * n;
                    p.set(&[g(i, a), g(j, b)], Vector::term(g(k, a + b), int(j as i64))).expect("homogeneous");
                }
            }
        }
    }
    PreLieAlgebra::new(&sp, Chirality::Left, p, None).expect("well formed")
}

/// `W_4 ⊗ Λθ` with `d = ad(e_2 ⊗ θ)`.
pub fn w4_theta() -> PreLieAlgebra {
    let l = vector_fields_theta(4);
    let x = l.space().index_of("e2t").unwrap();
    let d = l.ad(x).expect("pre-Lie");
    l.with_differential(Some(d)).expect("degree 1")
}

/// `sl_2` with zero differential, basis `h, e, f` in degree 0.
pub fn sl2() -> Dgla {
    let sp = GradedSpace::new([("h", 0), ("e", 0), ("f", 0)]).unwrap().arc();
    let mut br = AltMap::on(&sp, 2, 0);
    br.set(&[0, 1], Vector::term(1, int(2))).unwrap();
    br.set(&[0, 2], Vector::term(2, int(-2))).unwrap();
    br.set(&[1, 2], Vector::basis(0)).unwrap();
    Dgla::new(&sp, SymMap::on(&sp, 1, 1), br).unwrap()
}

type Mat2 = [[Scalar; 2]; 2];

fn mat(entries: [[i64; 2]; 2]) -> Mat2 {
    entries.map(|r| r.map(int))
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = mat([[0, 0], [0, 0]]);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                c[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    c
}

fn flat(a: &Mat2) -> SparseVec {
    (0..4).filter(|k| !a[k / 2][k % 2].is_zero()).map(|k| (k, a[k / 2][k % 2].clone())).collect()
}

/// A sub-dgla of `End(W)`, `W = (w_0 in degree 0, w_1 in degree 1)`, with
/// the graded commutator and `d = ad(λ E_{10})`, plus `extra` central
/// degree-0 generators. `E_{ij}` sends `w_j` to `w_i` and has degree
/// `i - j`.
fn matrix_dgla(basis: &[(&str, i64, Mat2)], extra: usize, lambda: &Scalar) -> Dgla {
    let names = basis.iter().map(|(n, d, _)| (n.to_string(), *d)).chain((0..extra).map(|k| (format!("k{k}"), 0)));
    let sp = GradedSpace::new(names).unwrap().arc();
    let flats: Vec<SparseVec> = basis.iter().map(|b| flat(&b.2)).collect();
    let express = |m: &Mat2| -> Vector {
        let c = coordinates(&flats, &flat(m)).expect("closed under the bracket");
        c.into_iter().collect()
    };
    let comm = |a: &(&str, i64, Mat2), b: &(&str, i64, Mat2)| -> Mat2 {
        let ab = mat_mul(&a.2, &b.2);
        let ba = mat_mul(&b.2, &a.2);
        let s = sign(a.1 * b.1);
        let mut c = ab;
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] -= &s * &ba[i][j];
            }
        }
        c
    };
    let mut br = AltMap::on(&sp, 2, 0);
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate().skip(i) {
            let v = express(&comm(a, b));
            if !v.is_zero() {
                br.set(&[i, j], v).unwrap();
            }
        }
    }
    let e10: (&str, i64, Mat2) = ("", 1, mat([[0, 0], [1, 0]]));
    let mut d = SymMap::on(&sp, 1, 1);
    for (i, a) in basis.iter().enumerate() {
        let v = express(&comm(&e10, a)).scaled(lambda);
        d.set(&[i], v).unwrap();
    }
    Dgla::new(&sp, d, br).unwrap()
}

fn gl11(lambda: &Scalar) -> Dgla {
    matrix_dgla(
        &[
            ("E00", 0, mat([[1, 0], [0, 0]])),
            ("E11", 0, mat([[0, 0], [0, 1]])),
            ("E10", 1, mat([[0, 0], [1, 0]])),
            ("E01", -1, mat([[0, 1], [0, 0]])),
        ],
        0,
        lambda,
    )
}

fn sl11(lambda: &Scalar, extra: usize) -> Dgla {
    matrix_dgla(
        &[
            ("I", 0, mat([[1, 0], [0, 1]])),
            ("E10", 1, mat([[0, 0], [1, 0]])),
            ("E01", -1, mat([[0, 1], [0, 0]])),
        ],
        extra,
        lambda,
    )
}

fn random_scalar(rng: &mut impl Rng, nonzero: bool) -> Scalar {
    loop {
        let n = rng.gen_range(-3i64..=3);
        let d = if rng.gen_bool(0.25) { rng.gen_range(2i64..=3) } else { 1 };
        if !nonzero || n != 0 {
            return ratio(n, d);
        }
    }
}

/// Re-expresses a dgla in a random degree-preserving basis `x0, x1, …`.
fn change_basis(l: &Dgla, rng: &mut impl Rng) -> Dgla {
    let old = l.space();
    let new = GradedSpace::new((0..old.dim()).map(|i| (format!("x{i}"), old.degree(i)))).unwrap().arc();
    // images[i] = P e_i, block diagonal by degree
    let mut images: Vec<SparseVec> = vec![SparseVec::new(); old.dim()];
    for gens in old.by_degree().values() {
        loop {
            let mut cols = Vec::new();
            for _ in gens {
                let mut c = SparseVec::new();
                for &g in gens {
                    let x = Scalar::from_integer(rng.gen_range(-2i64..=2).into());
                    if !x.is_zero() {
                        c.insert(g, x);
                    }
                }
                cols.push(c);
            }
            let m = crate::linalg::SparseMatrix::from_columns(old.dim(), &cols);
            if m.rank() == gens.len() {
                for (k, &g) in gens.iter().enumerate() {
                    images[g] = cols[k].clone();
                }
                break;
            }
        }
    }
    let vec_of = |s: &SparseVec| -> Vector { s.iter().map(|(k, x)| (*k, x.clone())).collect() };
    let back = |v: &Vector| -> Vector {
        let s: SparseVec = v.iter().map(|(g, x)| (g, x.clone())).collect();
        coordinates(&images, &s).expect("basis").into_iter().collect()
    };
    let mut br = AltMap::on(&new, 2, 0);
    for m in new.shifted(1).sym_monomials(2) {
        let v = l.bracket().eval_vectors(&[&vec_of(&images[m[0]]), &vec_of(&images[m[1]])]);
        br.set(&m, back(&v)).unwrap();
    }
    let mut d = SymMap::on(&new, 1, 1);
    for i in 0..new.dim() {
        d.set(&[i], back(&l.differential().apply(&vec_of(&images[i])))).unwrap();
    }
    Dgla::new(&new, d, br).unwrap()
}

/// A random valid dgla of dimension at most 4: `gl(1|1)`, `sl(1|1)` or
/// `sl(1|1) ⊕ K`, with `d = ad(λ E_{10})` for random `λ` (possibly zero), in
/// a random degree-preserving basis.
pub fn random_dgla(rng: &mut impl Rng) -> Dgla {
    let lambda = if rng.gen_bool(0.2) { Scalar::zero() } else { random_scalar(rng, true) };
    let base = match rng.gen_range(0..3) {
        0 => gl11(&lambda),
        1 => sl11(&lambda, 0),
        _ => sl11(&lambda, 1),
    };
    change_basis(&base, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    DSquared,
    Leibniz,
    Jacobi,
}

fn violates(l: &Dgla, axiom: Axiom) -> (bool, bool) {
    let r = l.check_axioms();
    let fails = [!r.d_squared.is_empty(), !r.leibniz.is_empty(), !r.jacobi.is_empty()];
    let k = axiom as usize;
    (fails[k], fails.iter().enumerate().all(|(i, f)| i == k || !f))
}

/// Perturbs one structure constant so that the given axiom fails,
/// preferring perturbations that leave the other two axioms intact. The
/// differential is perturbed for `d² = 0` and Leibniz, the bracket for
/// Jacobi; for `d² = 0` two entries forming a chain are perturbed when one
/// is not enough. Returns `None` if no such perturbation breaks the axiom.
pub fn corrupt(l: &Dgla, axiom: Axiom, rng: &mut impl Rng) -> Option<Dgla> {
    let sp = l.space();
    let mut candidates: Vec<Dgla> = Vec::new();
    match axiom {
        Axiom::DSquared | Axiom::Leibniz => {
            for x in 0..sp.dim() {
                for y in (0..sp.dim()).filter(|&y| sp.degree(y) == sp.degree(x) + 1) {
                    let mut d = l.differential().clone();
                    d.add(&[x], &Vector::basis(y)).unwrap();
                    candidates.push(Dgla::new(sp, d, l.bracket().clone()).unwrap());
                }
            }
        }
        Axiom::Jacobi => {
            for m in sp.shifted(1).sym_monomials(2) {
                let deg = sp.degree(m[0]) + sp.degree(m[1]);
                for z in (0..sp.dim()).filter(|&z| sp.degree(z) == deg) {
                    let mut br = l.bracket().clone();
                    br.add(&m, &Vector::basis(z)).unwrap();
                    candidates.push(Dgla::new(sp, l.differential().clone(), br).unwrap());
                }
            }
        }
    }
    let score = |cs: Vec<Dgla>| -> Vec<(Dgla, bool, bool)> {
        cs.into_iter()
            .map(|c| {
                let (hit, only) = violates(&c, axiom);
                (c, hit, only)
            })
            .filter(|c| c.1)
            .collect()
    };
    let mut scored = score(candidates);
    if scored.is_empty() && axiom == Axiom::DSquared {
        // With d = 0 one entry never breaks d² = 0; add a chain x → y → z.
        let mut chains = Vec::new();
        for x in 0..sp.dim() {
            for y in (0..sp.dim()).filter(|&y| sp.degree(y) == sp.degree(x) + 1) {
                for z in (0..sp.dim()).filter(|&z| sp.degree(z) == sp.degree(y) + 1) {
                    let mut d = l.differential().clone();
                    d.add(&[x], &Vector::basis(y)).unwrap();
                    d.add(&[y], &Vector::basis(z)).unwrap();
                    chains.push(Dgla::new(sp, d, l.bracket().clone()).unwrap());
                }
            }
        }
        scored = score(chains);
    }
    let pure: Vec<&Dgla> = scored.iter().filter(|c| c.2).map(|c| &c.0).collect();
    let pool: Vec<&Dgla> = if pure.is_empty() { scored.iter().map(|c| &c.0).collect() } else { pure };
    if pool.is_empty() {
        return None;
    }
    Some(pool[rng.gen_range(0..pool.len())].clone())
}

/// Right pre-Lie algebra of multilinear maps on `w` of arity at most `k`
/// under the Gerstenhaber product, modulo maps of higher arity. Generators
/// are the elementary maps, named `a.b->c`.
pub fn gerstenhaber_truncated(w: &Arc<GradedSpace>, k: usize) -> Result<PreLieAlgebra> {
    let mut elems: Vec<(Vec<usize>, usize)> = Vec::new();
    for a in 1..=k {
        for t in w.tensor_monomials(a) {
            for g in 0..w.dim() {
                elems.push((t.clone(), g));
            }
        }
    }
    let names = elems.iter().map(|(t, g)| {
        let ins: Vec<&str> = t.iter().map(|&i| w.name(i)).collect();
        (format!("{}->{}", ins.join("."), w.name(*g)), w.degree(*g) - w.monomial_degree(t))
    });
    let sp = GradedSpace::new(names)?.arc();
    let index: std::collections::HashMap<(Vec<usize>, usize), usize> =
        elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let as_map = |i: usize| -> Result<TensorMap> {
        let (t, g) = &elems[i];
        let mut m = TensorMap::on(w, t.len(), sp.degree(i));
        m.set(t, Vector::basis(*g))?;
        Ok(m)
    };
    let mut p = TensorMap::on(&sp, 2, 0);
    for x in 0..sp.dim() {
        for y in 0..sp.dim() {
            if elems[x].0.len() + elems[y].0.len() - 1 > k {
                continue;
            }
            let prod = gerstenhaber_product(&as_map(x)?, &as_map(y)?)?;
            let mut v = Vector::zero();
            for (t, out) in prod.entries() {
                for (h, c) in out.iter() {
                    v.add_term(index[&(t.clone(), h)], c.clone());
                }
            }
            p.set(&[x, y], v)?;
        }
    }
    PreLieAlgebra::new(&sp, Chirality::Right, p, None)
}

/// Random graded space of dimension `1..=max_dim` with degrees in
/// `-1..=1`, generators `v0, v1, …`.
pub fn random_space(rng: &mut impl Rng, max_dim: usize) -> Arc<GradedSpace> {
    let n = rng.gen_range(1..=max_dim);
    GradedSpace::new((0..n).map(|i| (format!("v{i}"), rng.gen_range(-1i64..=1)))).unwrap().arc()
}

/// Random homogeneous symmetric map; each admissible coefficient is
/// nonzero with probability `density`.
pub fn random_symmap(rng: &mut impl Rng, space: &Arc<GradedSpace>, arity: usize, degree: i64, density: f64) -> SymMap {
    SymMap::from_fn(space.clone(), space.clone(), arity, degree, |m| {
        let want = space.monomial_degree(m) + degree;
        let mut v = Vector::zero();
        for g in (0..space.dim()).filter(|&g| space.degree(g) == want) {
            if rng.gen_bool(density) {
                v.add_term(g, random_scalar(rng, true));
            }
        }
        v
    })
    .unwrap()
}

pub fn random_coderivation(
    rng: &mut impl Rng,
    space: &Arc<GradedSpace>,
    variant: Variant,
    degree: i64,
    max_arity: usize,
) -> Coderivation {
    let mut c = Coderivation::zero(space, variant, degree, max_arity);
    for n in 1..=max_arity {
        c.set_coefficient(random_symmap(rng, space, n, degree, 0.5)).unwrap();
    }
    if variant == Variant::Nonreduced {
        let v: Vector = (0..space.dim())
            .filter(|&g| space.degree(g) == degree)
            .filter_map(|g| rng.gen_bool(0.5).then(|| (g, random_scalar(rng, true))))
            .collect();
        c.set_q0(v).unwrap();
    }
    c
}

/// Random automorphism of `SV` with `f_1 = id`.
pub fn random_automorphism(rng: &mut impl Rng, space: &Arc<GradedSpace>, max_arity: usize) -> CoalgebraMorphism {
    let mut taylor = vec![SymMap::identity(space)];
    for n in 2..=max_arity {
        taylor.push(random_symmap(rng, space, n, 0, 0.4));
    }
    CoalgebraMorphism::from_taylor(space, space, taylor).unwrap()
}

/// Random abelian L∞[1] structure: only `q_1`, a random map from the
/// degree-0 part to the degree-1 part of a random space (so `q_1² = 0`).
pub fn random_abelian(rng: &mut impl Rng, max_arity: usize) -> Coderivation {
    let n0 = rng.gen_range(1..=2);
    let n1 = rng.gen_range(1..=2);
    let nm = rng.gen_range(0..=1);
    let names = (0..nm)
        .map(|i| (format!("a{i}"), -1))
        .chain((0..n0).map(|i| (format!("b{i}"), 0)))
        .chain((0..n1).map(|i| (format!("c{i}"), 1)));
    let sp = GradedSpace::new(names).unwrap().arc();
    let mut q1 = SymMap::on(&sp, 1, 1);
    for x in (0..sp.dim()).filter(|&x| sp.degree(x) == 0) {
        let v: Vector = (0..sp.dim())
            .filter(|&y| sp.degree(y) == 1)
            .filter_map(|y| rng.gen_bool(0.6).then(|| (y, random_scalar(rng, true))))
            .collect();
        q1.set(&[x], v).unwrap();
    }
    let mut q = Coderivation::zero(&sp, Variant::Reduced, 1, max_arity);
    q.set_coefficient(q1).unwrap();
    q
}
