//! Cross-checks against independent computations.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use qlevi_core::eigencone::{
    baseline_inequalities, generate_inequalities, membership, Alcove, Inequality, Verdict,
};
use qlevi_core::lp::{maximize, Constraint, LpResult};
use qlevi_core::quantum_ring::StructureTable;
use qlevi_core::rational::{int, rat, zero, Rational};
use qlevi_core::root_system::{CartanPoint, RootSystem, Weight};
use qlevi_core::unitary_oracle::su2_reference_membership;
use qlevi_core::weyl::ParabolicContext;
use qlevi_core::Error;

fn rs(label: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::from_label(label).unwrap())
}

type Partition = (i64, i64);
/// Coefficients keyed by `(partition, q-degree)`.
type Expansion = BTreeMap<(Partition, u32), i64>;

/// `s_λ h_r` in two variables (Pieri: add a horizontal strip of size `r`).
fn pieri(lambda: Partition, r: i64) -> Vec<Partition> {
    let (a, b) = lambda;
    (0..=r)
        .filter_map(|x| {
            let (na, nb) = (a + r - x, b + x);
            (x <= a - b && nb <= a).then_some((na, nb))
        })
        .collect()
}

fn h(r: i64) -> Option<Partition> {
    (r >= 0).then_some((r, 0))
}

/// `s_λ s_μ` in two variables via Jacobi-Trudi `s_μ = h_{μ1} h_{μ2} - h_{μ1+1} h_{μ2-1}`.
fn schur_product(lambda: Partition, mu: Partition) -> BTreeMap<Partition, i64> {
    let mut out = BTreeMap::new();
    for (r1, r2, sign) in [(mu.0, mu.1, 1), (mu.0 + 1, mu.1 - 1, -1)] {
        if h(r1).is_none() || h(r2).is_none() {
            continue;
        }
        for p in pieri(lambda, r1) {
            for q in pieri(p, r2) {
                *out.entry(q).or_insert(0) += sign;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Rim-hook reduction into the `2 × (n-2)` box, returning `(partition, degree, sign)`.
fn rim_reduce(mut p: Partition, n: i64) -> Option<(Partition, u32, i64)> {
    let (mut d, mut sign) = (0, 1);
    while p.0 > n - 2 {
        let (a, b) = p;
        if a - n >= b {
            p = (a - n, b);
            sign = -sign;
        } else if b > a - n + 1 && a - n + 1 >= 0 {
            p = (b - 1, a - n + 1);
        } else {
            return None;
        }
        d += 1;
    }
    Some((p, d, sign))
}

fn quantum_grassmannian(lambda: Partition, mu: Partition, n: i64) -> Expansion {
    let mut out = Expansion::new();
    for (p, c) in schur_product(lambda, mu) {
        if let Some((r, d, s)) = rim_reduce(p, n) {
            *out.entry((r, d)).or_insert(0) += s * c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// The partition of `σ_u` on `Gr(2, n)` from the subset `u{1, 2}`.
fn partition_of(rs: &RootSystem, c: &ParabolicContext, u: usize, n: i64) -> Partition {
    let w = c.element(u).act_weight(rs, &Weight::fundamental(rs.rank(), 1));
    let coords: Vec<Rational> = w.coords.clone();
    // ε-coordinates up to a common shift.
    let eps: Vec<Rational> = (0..n as usize)
        .map(|i| coords[i.min(coords.len())..].iter().fold(zero(), |a, x| a + x))
        .collect();
    let low = eps.iter().min().unwrap().clone();
    let subset: Vec<i64> = (0..n).filter(|&i| eps[i as usize] != low).map(|i| i + 1).collect();
    assert_eq!(subset.len(), 2);
    (n - 2 + 1 - subset[0], n - 2 + 2 - subset[1])
}

#[test]
fn quantum_products_on_gr24_match_pieri_and_rim_hooks() {
    let n = 4;
    let rs = rs("A3");
    let ctx = Arc::new(ParabolicContext::maximal(rs.clone(), 1).unwrap());
    let table = StructureTable::build(ctx.clone()).unwrap();
    let parts: Vec<Partition> = (0..ctx.len()).map(|u| partition_of(&rs, &ctx, u, n)).collect();
    for (u, p) in parts.iter().enumerate() {
        assert_eq!((p.0 + p.1) as usize, ctx.codim(u));
    }
    for u in 0..ctx.len() {
        for v in 0..ctx.len() {
            let mut got = Expansion::new();
            for (x, d, c) in table.product_basis(u, v).terms() {
                got.insert((parts[x], d[0]), i64::try_from(c.clone()).unwrap());
            }
            let want = quantum_grassmannian(parts[u], parts[v], n);
            assert_eq!(got, want, "Gr(2,4): {:?} * {:?}", parts[u], parts[v]);
        }
    }
}

/// Each baseline inequality is implied by the deformed system on the alcove.
#[test]
fn dropped_baseline_inequalities_are_implied() {
    for label in ["B2", "G2"] {
        let rs = rs(label);
        let n = 3;
        let deformed = generate_inequalities(&rs, n).unwrap();
        let baseline = baseline_inequalities(&rs, n).unwrap();
        let l = rs.rank();
        let mut cons: Vec<Constraint> = (0..n)
            .map(|k| {
                let mut a = vec![zero(); n * l];
                for j in 0..l {
                    a[k * l + j] = int(rs.highest_root()[j]);
                }
                Constraint::le(a, int(1))
            })
            .collect();
        cons.extend(deformed.iter().map(|q: &Inequality| Constraint::le(q.flattened(), q.rhs.clone())));
        for q in &baseline {
            match maximize(&q.flattened(), &cons).unwrap() {
                LpResult::Optimal { value, .. } => assert!(value <= q.rhs, "{label}: {} not implied", q.describe()),
                other => panic!("{other:?}"),
            }
        }
    }
}

#[test]
fn spaces_not_generated_by_divisors_are_reported() {
    // H*(Gr(2,5)) needs σ_2 as a generator.
    let ctx = Arc::new(ParabolicContext::maximal(rs("A4"), 1).unwrap());
    let err = StructureTable::build(ctx).unwrap_err();
    assert!(matches!(err, Error::UnsupportedSpace { .. }), "{err}");
}

#[test]
fn point_and_line_counts_on_the_projective_plane() {
    // One line through two points, meeting a line.
    let ctx = Arc::new(ParabolicContext::maximal(rs("A2"), 0).unwrap());
    let table = StructureTable::build(ctx.clone()).unwrap();
    let pt = (0..ctx.len()).find(|&u| ctx.codim(u) == 2).unwrap();
    let line = (0..ctx.len()).find(|&u| ctx.codim(u) == 1).unwrap();
    assert_eq!(table.gw_invariant(&[pt, pt, line], &[1]).unwrap(), BigInt::from(1));
    // Five points in degree 2 exceed the dimension: codim 10, not 2 + 3·2.
    assert_eq!(table.gw_invariant(&[pt; 5], &[2]).unwrap(), BigInt::from(0));
    assert!(!table.dimension_condition(&[pt; 5], &[2]));
    // h^7 = q^2 h in QH(P^2).
    assert_eq!(table.gw_invariant(&[pt, pt, pt, line, line], &[2]).unwrap(), BigInt::from(1));
}

fn su2_point(ts: &[i64], denom: i64) -> (Vec<Rational>, Vec<CartanPoint>) {
    let ts: Vec<Rational> = ts.iter().map(|&k| rat(k, denom)).collect();
    let pts = ts.iter().map(|t| CartanPoint::new(vec![t * int(2)])).collect();
    (ts, pts)
}

#[test]
fn su2_membership_matches_closed_form_on_grids() {
    let rs = rs("A1");
    // Denominators giving roughly 10^4 points per n.
    for (n, denom) in [(3usize, 42i64), (4, 18), (5, 10)] {
        let ineqs = generate_inequalities(&rs, n).unwrap();
        let steps = denom / 2 + 1;
        let total = (steps as usize).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let ks: Vec<i64> = (0..n)
                .map(|_| {
                    let k = (c % steps as usize) as i64;
                    c /= steps as usize;
                    k
                })
                .collect();
            let (ts, pts) = su2_point(&ks, denom);
            let exact = membership(&rs, n, &pts, &ineqs).unwrap().verdict != Verdict::Outside;
            assert_eq!(exact, su2_reference_membership(&ts).unwrap(), "n = {n}, k = {ks:?}/{denom}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn su2_membership_matches_closed_form(ks in proptest::collection::vec(0i64..=12, 3..=5)) {
        let rs = rs("A1");
        let n = ks.len();
        let ineqs = generate_inequalities(&rs, n).unwrap();
        let (ts, pts) = su2_point(&ks, 24);
        let exact = membership(&rs, n, &pts, &ineqs).unwrap().verdict != Verdict::Outside;
        prop_assert_eq!(exact, su2_reference_membership(&ts).unwrap());
    }

    #[test]
    fn alcove_membership_is_convex(a in proptest::collection::vec(0i64..=30, 2), b in proptest::collection::vec(0i64..=30, 2)) {
        let rs = rs("B2");
        let alcove = Alcove::new(&rs);
        let p = CartanPoint::new(a.iter().map(|&k| rat(k, 30)).collect());
        let q = CartanPoint::new(b.iter().map(|&k| rat(k, 30)).collect());
        let mid = CartanPoint::new(p.coords.iter().zip(&q.coords).map(|(x, y)| (x + y) / int(2)).collect());
        if alcove.contains(&p) && alcove.contains(&q) {
            prop_assert!(alcove.contains(&mid));
        }
    }
}
