//! Inequalities of the multiplicative eigenvalue polytope, exact membership,
//! and LP certificates of irredundancy and distinctness.
//!
//! A point of `𝒜ⁿ` is a list of `n` Cartan points `μ_k = Σ_j m_{k,j} x_j`; the
//! inequality attached to `(u_1, …, u_n; d)` and a maximal parabolic `P` reads
//! `Σ_k (u_k ω_P)(μ_k) <= d`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::deformed_ring::DeformedRing;
use crate::error::{Error, Result};
use crate::linalg::nullspace;
use crate::lp::{feasible_point, maximize, Constraint, LpResult};
use crate::quantum_ring::{QRingElement, StructureTable};
use crate::rational::{dot, format_rational, int, rat, zero, Rational};
use crate::root_system::{CartanPoint, RootSystem, Weight};
use crate::weyl::ParabolicContext;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequality {
    /// The omitted simple root `α_{i_P}` (0-based).
    pub parabolic: usize,
    /// Schubert indices into `W^P`.
    pub tuple: Vec<usize>,
    pub words: Vec<Vec<usize>>,
    pub d: u32,
    /// `u_k ω_P` in fundamental-weight coordinates.
    pub lhs: Vec<Weight>,
    /// `(u_k ω_P)(x_j)`: the coefficient of `m_{k,j}`.
    pub coeffs: Vec<Vec<Rational>>,
    pub rhs: Rational,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InequalityJson {
    #[serde(rename = "type")]
    pub ty: String,
    pub rank: usize,
    pub n: usize,
    pub parabolic: usize,
    /// Reduced words as 1-based simple reflection indices.
    pub u: Vec<Vec<usize>>,
    pub d: u32,
    pub lhs: Vec<Vec<String>>,
    pub rhs: u32,
}

impl Inequality {
    pub fn n(&self) -> usize {
        self.tuple.len()
    }

    /// Coefficients of all `m_{k,j}` in one vector (point-major order).
    pub fn flattened(&self) -> Vec<Rational> {
        self.coeffs.iter().flatten().cloned().collect()
    }

    /// `Σ_k (u_k ω_P)(μ_k)`.
    pub fn evaluate(&self, point: &[CartanPoint]) -> Rational {
        self.coeffs
            .iter()
            .zip(point)
            .fold(zero(), |acc, (c, p)| acc + dot(c, &p.coords))
    }

    pub fn to_json(&self, rs: &RootSystem) -> InequalityJson {
        InequalityJson {
            ty: rs.cartan_type().to_string(),
            rank: rs.rank(),
            n: self.n(),
            parabolic: self.parabolic + 1,
            u: self.words.iter().map(|w| w.iter().map(|i| i + 1).collect()).collect(),
            d: self.d,
            lhs: self
                .lhs
                .iter()
                .map(|w| w.coords.iter().map(format_rational).collect())
                .collect(),
            rhs: self.d,
        }
    }

    /// Human-readable form, e.g. `-1/2 m1.1 + 1/2 m2.1 - 1/2 m3.1 <= 0`.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            for (j, a) in c.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let sign = match (out.is_empty(), a.is_negative()) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                let mag = a.abs();
                let scale = if mag.is_one() { String::new() } else { format!("{} ", format_rational(&mag)) };
                out.push_str(&format!("{sign}{scale}m{}.{}", k + 1, j + 1));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        format!("{out} <= {}", format_rational(&self.rhs))
    }
}

/// The fundamental alcove `{μ : α_i(μ) >= 0, θ(μ) <= 1}`.
#[derive(Debug, Clone)]
pub struct Alcove {
    theta: Vec<i64>,
}

impl Alcove {
    pub fn new(rs: &RootSystem) -> Self {
        Self {
            theta: rs.highest_root().to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        self.theta.len()
    }

    /// All `ℓ + 1` walls as `a · m <= b`.
    pub fn constraints(&self) -> Vec<(Vec<Rational>, Rational)> {
        let l = self.rank();
        let mut out: Vec<(Vec<Rational>, Rational)> = (0..l)
            .map(|i| {
                let mut a = vec![zero(); l];
                a[i] = int(-1);
                (a, zero())
            })
            .collect();
        out.push((self.theta.iter().map(|&t| int(t)).collect(), int(1)));
        out
    }

    /// Equal `m_j` with `θ(μ) = 1/2`.
    pub fn barycenter(&self) -> CartanPoint {
        let s: i64 = self.theta.iter().sum();
        CartanPoint::new(vec![rat(1, 2 * s); self.rank()])
    }

    pub fn contains(&self, p: &CartanPoint) -> bool {
        self.check(p, 0).is_ok()
    }

    pub fn check(&self, p: &CartanPoint, index: usize) -> Result<()> {
        if p.coords.len() != self.rank() {
            return Err(Error::PointShape {
                expected: self.rank(),
                got: p.coords.len(),
            });
        }
        if let Some(j) = p.coords.iter().position(|m| m.is_negative()) {
            return Err(Error::OutsideAlcove {
                index,
                constraint: format!("alpha_{}(mu) >= 0", j + 1),
            });
        }
        if dot(&self.theta.iter().map(|&t| int(t)).collect::<Vec<_>>(), &p.coords) > int(1) {
            return Err(Error::OutsideAlcove {
                index,
                constraint: "theta(mu) <= 1".into(),
            });
        }
        Ok(())
    }

    /// Smallest slack of `p` against any wall.
    pub fn margin(&self, p: &CartanPoint) -> Rational {
        self.constraints()
            .iter()
            .map(|(a, b)| b - dot(a, &p.coords))
            .min()
            .expect("alcove has walls")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// `⟨…⟩^{⊙₀}_d = 1`.
    Deformed,
    /// `⟨…⟩_d = 1`.
    Baseline,
}

/// The deformed rings of every maximal parabolic, in node order.
pub fn maximal_rings(rs: &Arc<RootSystem>) -> Result<Vec<Arc<DeformedRing>>> {
    maximal_rings_with(rs, |ctx| StructureTable::build(ctx).map(Arc::new))
}

/// As [`maximal_rings`], with a custom table source (e.g. a cache).
pub fn maximal_rings_with(
    rs: &Arc<RootSystem>,
    table: impl Fn(Arc<ParabolicContext>) -> Result<Arc<StructureTable>>,
) -> Result<Vec<Arc<DeformedRing>>> {
    (0..rs.rank())
        .map(|node| {
            let ctx = Arc::new(ParabolicContext::maximal(rs.clone(), node)?);
            Ok(Arc::new(DeformedRing::new(table(ctx)?)?))
        })
        .collect()
}

fn build_inequality(ring: &DeformedRing, tuple: Vec<usize>, d: u32) -> Inequality {
    let ctx = ring.context();
    let rs = ctx.root_system();
    let node = ctx.s_p()[0];
    let omega = Weight::fundamental(rs.rank(), node);
    let lhs: Vec<Weight> = tuple
        .iter()
        .map(|&u| ctx.element(u).act_weight(rs, &omega))
        .collect();
    let coeffs = lhs.iter().map(|w| rs.weight_on_x(w)).collect();
    Inequality {
        parabolic: node,
        words: tuple.iter().map(|&u| ctx.element(u).word().to_vec()).collect(),
        tuple,
        d,
        lhs,
        coeffs,
        rhs: int(d as i64),
    }
}

/// Inequalities of one maximal parabolic whose chosen coefficient is exactly 1.
pub fn inequalities_for_ring(ring: &DeformedRing, n: usize, criterion: Criterion) -> Result<Vec<Inequality>> {
    if n < 2 {
        return Err(Error::BadArity { min: 2, got: n });
    }
    let ctx = ring.context();
    if !ctx.is_maximal() {
        return Err(Error::NotMaximal(ctx.s_p().len()));
    }
    let size = ctx.len();
    let cap = ((n as i64 - 1) * ctx.dim() as i64 / ctx.q_degrees()[0]) as u32;
    let bound = [cap];
    let prefixes: Vec<Vec<usize>> = (0..size.pow(n as u32 - 1))
        .map(|mut code| {
            let mut t = vec![0; n - 1];
            for slot in t.iter_mut().rev() {
                *slot = code % size;
                code /= size;
            }
            t
        })
        .collect();
    let table = ring.table();
    let mut out: Vec<Inequality> = prefixes
        .par_iter()
        .flat_map_iter(|prefix| {
            let mut acc = QRingElement::basis(prefix[0], 1);
            for &u in &prefix[1..] {
                let b = QRingElement::basis(u, 1);
                acc = match criterion {
                    Criterion::Deformed => ring.mul_zero(&acc, &b, Some(&bound)),
                    Criterion::Baseline => table.product_bounded(&acc, &b, Some(&bound)),
                };
            }
            acc.terms()
                .filter(|(_, _, c)| c.is_one())
                .map(|(x, d, _)| {
                    let mut tuple = prefix.clone();
                    tuple.push(ctx.dual(x));
                    build_inequality(ring, tuple, d[0])
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| (a.d, &a.tuple).cmp(&(b.d, &b.tuple)));
    Ok(out)
}

pub fn inequalities_from_rings(rings: &[Arc<DeformedRing>], n: usize, criterion: Criterion) -> Result<Vec<Inequality>> {
    let mut out = Vec::new();
    for r in rings {
        out.extend(inequalities_for_ring(r, n, criterion)?);
    }
    Ok(out)
}

/// The deformed system: tuples with `⟨σ_{u_1}, …, σ_{u_n}⟩^{⊙₀}_d = 1`.
pub fn generate_inequalities(rs: &Arc<RootSystem>, n: usize) -> Result<Vec<Inequality>> {
    inequalities_from_rings(&maximal_rings(rs)?, n, Criterion::Deformed)
}

/// The undeformed system: tuples with `⟨σ_{u_1}, …, σ_{u_n}⟩_d = 1`.
pub fn baseline_inequalities(rs: &Arc<RootSystem>, n: usize) -> Result<Vec<Inequality>> {
    inequalities_from_rings(&maximal_rings(rs)?, n, Criterion::Baseline)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub verdict: Verdict,
    /// Indices of strictly violated inequalities.
    pub violated: Vec<usize>,
    /// Indices of tight inequalities.
    pub tight: Vec<usize>,
    /// `min_j (rhs_j - lhs_j(point))` over the inequalities.
    pub slack: Option<Rational>,
}

/// Exact membership of `points` (one Cartan point per factor).
pub fn membership(rs: &RootSystem, n: usize, points: &[CartanPoint], ineqs: &[Inequality]) -> Result<Membership> {
    if points.len() != n {
        return Err(Error::PointShape {
            expected: n,
            got: points.len(),
        });
    }
    let alcove = Alcove::new(rs);
    for (k, p) in points.iter().enumerate() {
        alcove.check(p, k + 1)?;
    }
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    let mut slack: Option<Rational> = None;
    for (j, ineq) in ineqs.iter().enumerate() {
        if ineq.n() != n {
            return Err(Error::PointShape {
                expected: ineq.n(),
                got: n,
            });
        }
        let s = &ineq.rhs - ineq.evaluate(points);
        if s.is_negative() {
            violated.push(j);
        } else if s.is_zero() {
            tight.push(j);
        }
        slack = Some(match slack {
            Some(m) if m <= s => m,
            _ => s,
        });
    }
    let verdict = if !violated.is_empty() {
        Verdict::Outside
    } else if !tight.is_empty() {
        Verdict::Boundary
    } else {
        Verdict::Inside
    };
    Ok(Membership {
        verdict,
        violated,
        tight,
        slack,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// A point of `𝒜ⁿ` satisfying every other inequality and violating this one.
    ViolatingPoint { point: Vec<Rational>, value: Rational },
    /// Affinely independent points spanning the tight face, which has
    /// dimension `n ℓ - 1`.
    Facet { dimension: usize, points: Vec<Vec<Rational>> },
    /// Neither certificate exists.
    Redundant { optimum: Rational, face_dimension: Option<usize> },
}

impl Certificate {
    pub fn is_irredundant(&self) -> bool {
        !matches!(self, Certificate::Redundant { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IrredundancyReport {
    pub certificates: Vec<Certificate>,
    /// Indices that failed certification.
    pub failures: Vec<usize>,
    pub warnings: Vec<String>,
}

impl IrredundancyReport {
    pub fn all_irredundant(&self) -> bool {
        self.failures.is_empty()
    }
}

fn alcove_rows(rs: &RootSystem, n: usize) -> Vec<Constraint> {
    let l = rs.rank();
    let theta = rs.highest_root();
    (0..n)
        .map(|k| {
            let mut a = vec![zero(); n * l];
            for j in 0..l {
                a[k * l + j] = int(theta[j]);
            }
            Constraint::le(a, int(1))
        })
        .collect()
}

/// Dimension of `{x >= 0 : constraints}` with witness points, or `None` if empty.
pub fn affine_dimension(nvars: usize, cons: &[Constraint]) -> Result<Option<(usize, Vec<Vec<Rational>>)>> {
    let Some(p0) = feasible_point(nvars, cons)? else {
        return Ok(None);
    };
    let mut dirs: Vec<Vec<Rational>> = Vec::new();
    let mut normals: Vec<Vec<Rational>> = Vec::new();
    let mut points = vec![p0.clone()];
    loop {
        let mut known = dirs.clone();
        known.extend(normals.iter().cloned());
        let free = nullspace(&known, nvars);
        let Some(c) = free.into_iter().next() else { break };
        let base = dot(&c, &p0);
        let mut moved = false;
        for sign in [1i64, -1] {
            let obj: Vec<Rational> = c.iter().map(|x| x * int(sign)).collect();
            if let LpResult::Optimal { point, .. } = maximize(&obj, cons)? {
                if dot(&c, &point) != base {
                    dirs.push(point.iter().zip(&p0).map(|(a, b)| a - b).collect());
                    points.push(point);
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            normals.push(c);
        }
    }
    Ok(Some((dirs.len(), points)))
}

/// Certifies each inequality as irredundant by exact LP. For `n = 2` the
/// polytope is lower dimensional; the check is skipped with a warning.
pub fn irredundancy_check(rs: &RootSystem, n: usize, ineqs: &[Inequality]) -> Result<IrredundancyReport> {
    if n < 3 {
        return Ok(IrredundancyReport {
            warnings: vec![format!(
                "irredundancy is only checked for n >= 3; for n = {n} the polytope is lower dimensional"
            )],
            ..Default::default()
        });
    }
    let nvars = n * rs.rank();
    let rows: Vec<Constraint> = ineqs.iter().map(|q| Constraint::le(q.flattened(), q.rhs.clone())).collect();
    let alcove = alcove_rows(rs, n);
    let certs: Vec<Certificate> = (0..ineqs.len())
        .into_par_iter()
        .map(|j| -> Result<Certificate> {
            let mut others: Vec<Constraint> = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, c)| c.clone())
                .collect();
            others.extend(alcove.iter().cloned());
            let obj = rows[j].coeffs.clone();
            let optimum = match maximize(&obj, &others)? {
                LpResult::Optimal { value, point } => {
                    if value > rows[j].rhs {
                        return Ok(Certificate::ViolatingPoint { point, value });
                    }
                    value
                }
                LpResult::Infeasible => return Err(Error::LpInfeasible),
                LpResult::Unbounded => return Err(Error::Internal("alcove LP is unbounded".into())),
            };
            let mut face = others;
            face.push(Constraint::eq(obj, rows[j].rhs.clone()));
            let dim = affine_dimension(nvars, &face)?;
            match dim {
                Some((k, points)) if k + 1 == nvars => Ok(Certificate::Facet { dimension: k, points }),
                other => Ok(Certificate::Redundant {
                    optimum,
                    face_dimension: other.map(|(k, _)| k),
                }),
            }
        })
        .collect::<Result<_>>()?;
    let failures = certs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_irredundant())
        .map(|(i, _)| i)
        .collect();
    Ok(IrredundancyReport {
        certificates: certs,
        failures,
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DistinctnessReport {
    /// Pairs `(i, j)`, `i < j`, whose `(lhs, rhs)` vectors are positive multiples.
    pub proportional_pairs: Vec<(usize, usize)>,
}

impl DistinctnessReport {
    pub fn passed(&self) -> bool {
        self.proportional_pairs.is_empty()
    }
}

/// Detects inequalities whose `(lhs, rhs)` vectors are positive rational
/// multiples of one another.
pub fn distinctness_check(ineqs: &[Inequality]) -> DistinctnessReport {
    let mut seen: HashMap<Vec<Rational>, Vec<usize>> = HashMap::new();
    for (i, q) in ineqs.iter().enumerate() {
        let mut v = q.flattened();
        v.push(q.rhs.clone());
        // Only positive multiples describe the same half-space.
        if let Some(lead) = v.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            for x in v.iter_mut() {
                *x /= &lead;
            }
        }
        seen.entry(v).or_default().push(i);
    }
    let mut pairs: Vec<(usize, usize)> = seen
        .values()
        .flat_map(|ix| {
            ix.iter()
                .enumerate()
                .flat_map(move |(a, &i)| ix[a + 1..].iter().map(move |&j| (i, j)))
        })
        .collect();
    pairs.sort_unstable();
    DistinctnessReport {
        proportional_pairs: pairs,
    }
}

/// Integer GW or `⊙₀` coefficient recorded with a tuple, for reporting.
pub fn tuple_coefficient(ring: &DeformedRing, q: &Inequality, criterion: Criterion) -> Result<BigInt> {
    match criterion {
        Criterion::Deformed => ring.deformed_coeff_tuple(&q.tuple, &[q.d]),
        Criterion::Baseline => ring.table().gw_invariant(&q.tuple, &[q.d]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> Arc<RootSystem> {
        Arc::new(RootSystem::from_label("A1").unwrap())
    }

    fn pts(ts: &[Rational]) -> Vec<CartanPoint> {
        // t = m/2 on A1.
        ts.iter().map(|t| CartanPoint::new(vec![t * int(2)])).collect()
    }

    #[test]
    fn su2_counts() {
        let rs = a1();
        assert_eq!(generate_inequalities(&rs, 3).unwrap().len(), 4);
        assert_eq!(generate_inequalities(&rs, 4).unwrap().len(), 8);
        assert!(generate_inequalities(&rs, 3).unwrap().iter().all(|q| q.d <= 1));
        assert_eq!(generate_inequalities(&rs, 1).unwrap_err(), Error::BadArity { min: 2, got: 1 });
    }

    #[test]
    fn su2_membership_examples() {
        let rs = a1();
        let ineqs = generate_inequalities(&rs, 3).unwrap();
        let m = membership(&rs, 3, &pts(&[rat(1, 4), rat(1, 4), rat(1, 4)]), &ineqs).unwrap();
        assert_eq!(m.verdict, Verdict::Inside);
        let m = membership(&rs, 3, &pts(&[rat(1, 2), rat(1, 2), rat(1, 2)]), &ineqs).unwrap();
        assert_eq!(m.verdict, Verdict::Outside);
        assert_eq!(m.violated.len(), 1);
        assert_eq!(ineqs[m.violated[0]].d, 1);
        let m = membership(&rs, 3, &pts(&[rat(1, 2), rat(1, 2), int(0)]), &ineqs).unwrap();
        assert_eq!(m.verdict, Verdict::Boundary);
        assert!(m.tight.len() >= 2);
        let err = membership(&rs, 3, &pts(&[int(1), int(0), int(0)]), &ineqs).unwrap_err();
        assert!(matches!(err, Error::OutsideAlcove { index: 1, .. }));
    }

    #[test]
    fn alcove_walls() {
        let rs = RootSystem::from_label("G2").unwrap();
        let a = Alcove::new(&rs);
        assert_eq!(a.constraints().len(), 3);
        let b = a.barycenter();
        assert!(a.margin(&b).is_positive());
    }

    #[test]
    fn su2_irredundant() {
        let rs = a1();
        let ineqs = generate_inequalities(&rs, 3).unwrap();
        let rep = irredundancy_check(&rs, 3, &ineqs).unwrap();
        assert!(rep.all_irredundant(), "{rep:?}");
        assert!(irredundancy_check(&rs, 3, &[]).unwrap().certificates.is_empty());
        let rep = irredundancy_check(&rs, 2, &generate_inequalities(&rs, 2).unwrap()).unwrap();
        assert_eq!(rep.warnings.len(), 1);
    }

    #[test]
    fn duplicate_detection() {
        let rs = a1();
        let mut ineqs = generate_inequalities(&rs, 3).unwrap();
        assert!(distinctness_check(&ineqs).passed());
        ineqs.push(ineqs[0].clone());
        assert_eq!(distinctness_check(&ineqs).proportional_pairs, vec![(0, 4)]);
        let mut scaled = ineqs[1].clone();
        for c in scaled.coeffs.iter_mut().flatten() {
            *c *= int(3);
        }
        scaled.rhs *= int(3);
        ineqs.push(scaled);
        assert!(distinctness_check(&ineqs).proportional_pairs.contains(&(1, 5)));
    }

    #[test]
    fn opposite_half_spaces_are_distinct() {
        // On A1 with n = 2 the two d = 0 inequalities are negatives of each other.
        let ineqs = generate_inequalities(&a1(), 2).unwrap();
        assert!(distinctness_check(&ineqs).passed());
    }

    #[test]
    fn redundant_copy_fails_certification() {
        let rs = a1();
        let mut ineqs = generate_inequalities(&rs, 3).unwrap();
        let mut weaker = ineqs[0].clone();
        weaker.rhs += int(1);
        ineqs.push(weaker);
        let rep = irredundancy_check(&rs, 3, &ineqs).unwrap();
        assert_eq!(rep.failures, vec![4]);
    }

    #[test]
    fn facet_fallback_on_tight_duplicate() {
        // Two copies of the same inequality: each is tight-but-not-violable,
        // and the shared face is a facet.
        let rs = a1();
        let mut ineqs = generate_inequalities(&rs, 3).unwrap();
        ineqs.push(ineqs[0].clone());
        let rep = irredundancy_check(&rs, 3, &ineqs).unwrap();
        assert!(matches!(rep.certificates[0], Certificate::Facet { dimension: 2, .. }));
    }
}
