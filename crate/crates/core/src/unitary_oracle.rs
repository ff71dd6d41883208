//! Numerical oracle for `1 ∈ C(μ_1)⋯C(μ_n)` in a faithful unitary
//! representation, and the closed-form SU(2) answer.
//!
//! The search fixes `U_1 = I` and runs Levenberg–Marquardt on
//! `vec(Π_k U_k D_k U_k^† - I)` with `D_k = Exp(2πi μ_k)`, updating each
//! `U_k ← U_k exp(Σ_a ε_a X_a)` over a basis `X_a` of the compact Lie algebra.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::eigencone::Alcove;
use crate::error::{Error, Result};
use crate::rational::{dot, int, rat, to_f64, Rational};
use crate::root_system::{CartanPoint, RootSystem, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    SU2,
    SU3,
    SU4,
    Sp4,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::SU2 => "SU2",
            Group::SU3 => "SU3",
            Group::SU4 => "SU4",
            Group::Sp4 => "Sp4",
        })
    }
}

impl Group {
    /// The root system whose alcove parametrizes conjugacy classes.
    pub fn type_label(self) -> &'static str {
        match self {
            Group::SU2 => "A1",
            Group::SU3 => "A2",
            Group::SU4 => "A3",
            Group::Sp4 => "B2",
        }
    }

    pub fn for_type(label: &str) -> Option<Group> {
        match label {
            "A1" => Some(Group::SU2),
            "A2" => Some(Group::SU3),
            "A3" => Some(Group::SU4),
            "B2" | "C2" => Some(Group::Sp4),
            _ => None,
        }
    }
}

type CMat = DMatrix<Complex64>;

/// A faithful unitary representation with its weights and a real basis of
/// the Lie algebra (anti-Hermitian matrices).
pub struct GroupRep {
    group: Group,
    rs: RootSystem,
    /// `λ(x_j)` for each weight `λ` of the representation, in matrix order.
    weights_on_x: Vec<Vec<Rational>>,
    generators: Vec<CMat>,
}

impl fmt::Debug for GroupRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRep({}, N = {})", self.group, self.dim())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl GroupRep {
    pub fn new(group: Group) -> Result<Self> {
        let rs = RootSystem::from_label(group.type_label())?;
        let l = rs.rank();
        let weights: Vec<Weight> = match group {
            Group::Sp4 => {
                // Orbit of ω_2 for B2, ordered (λa, λb, -λa, -λb).
                let a = Weight::fundamental(2, 1);
                let b = Weight::fundamental(2, 0).sub(&Weight::fundamental(2, 1));
                let neg = |w: &Weight| w.scale(&int(-1));
                vec![a.clone(), b.clone(), neg(&a), neg(&b)]
            }
            _ => {
                // ε_k = ω_k - ω_{k-1} (ω_0 = ω_{N} = 0).
                let n = l + 1;
                (0..n)
                    .map(|k| {
                        let up = if k < l { Weight::fundamental(l, k) } else { Weight::zero(l) };
                        let down = if k > 0 { Weight::fundamental(l, k - 1) } else { Weight::zero(l) };
                        up.sub(&down)
                    })
                    .collect()
            }
        };
        let weights_on_x = weights.iter().map(|w| rs.weight_on_x(w)).collect();
        let n = weights.len();
        let generators = match group {
            Group::Sp4 => sp4_generators(),
            _ => su_generators(n),
        };
        Ok(Self {
            group,
            rs,
            weights_on_x,
            generators,
        })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.weights_on_x.len()
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    /// Eigenvalue phases `λ(μ)` (in turns) of `Exp(2πiμ)`.
    pub fn phases(&self, mu: &CartanPoint) -> Vec<Rational> {
        self.weights_on_x.iter().map(|w| dot(w, &mu.coords)).collect()
    }

    /// `Exp(2πi μ)` as a diagonal unitary.
    pub fn exp_diag(&self, mu: &CartanPoint) -> CMat {
        let ph = self.phases(mu);
        CMat::from_diagonal(&DVector::from_iterator(
            ph.len(),
            ph.iter().map(|p| Complex64::from_polar(1.0, 2.0 * PI * to_f64(p))),
        ))
    }

    /// The symplectic form preserved by the Sp4 representation.
    pub fn symplectic_form() -> CMat {
        let mut j = CMat::zeros(4, 4);
        j[(0, 2)] = c(1.0, 0.0);
        j[(1, 3)] = c(1.0, 0.0);
        j[(2, 0)] = c(-1.0, 0.0);
        j[(3, 1)] = c(-1.0, 0.0);
        j
    }
}

fn su_generators(n: usize) -> Vec<CMat> {
    let mut out = Vec::new();
    for k in 0..n - 1 {
        let mut m = CMat::zeros(n, n);
        m[(k, k)] = c(0.0, 1.0);
        m[(k + 1, k + 1)] = c(0.0, -1.0);
        out.push(m);
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut m = CMat::zeros(n, n);
            m[(j, k)] = c(1.0, 0.0);
            m[(k, j)] = c(-1.0, 0.0);
            out.push(m);
            let mut m = CMat::zeros(n, n);
            m[(j, k)] = c(0.0, 1.0);
            m[(k, j)] = c(0.0, 1.0);
            out.push(m);
        }
    }
    out
}

/// `[[A, B], [-conj(B), conj(A)]]` with `A ∈ u(2)` and `B` complex symmetric.
fn sp4_generators() -> Vec<CMat> {
    let block = |a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]| {
        let mut m = CMat::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = a[i][j];
                m[(i, j + 2)] = b[i][j];
                m[(i + 2, j)] = -b[i][j].conj();
                m[(i + 2, j + 2)] = a[i][j].conj();
            }
        }
        m
    };
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let zero2 = [[z, z], [z, z]];
    vec![
        block([[i, z], [z, z]], zero2),
        block([[z, z], [z, i]], zero2),
        block([[z, one], [-one, z]], zero2),
        block([[z, i], [i, z]], zero2),
        block(zero2, [[one, z], [z, z]]),
        block(zero2, [[i, z], [z, z]]),
        block(zero2, [[z, z], [z, one]]),
        block(zero2, [[z, z], [z, i]]),
        block(zero2, [[z, one], [one, z]]),
        block(zero2, [[z, i], [i, z]]),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            restarts: 200,
            seed: 0,
            max_iters: 300,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericVerdict {
    /// Some restart reached `‖P - I‖_F < tol`.
    Feasible { residual: f64, restart: usize },
    /// No restart reached the tolerance; the best residual found.
    NoWitness { best_residual: f64 },
}

impl NumericVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, NumericVerdict::Feasible { .. })
    }

    pub fn residual(&self) -> f64 {
        match *self {
            NumericVerdict::Feasible { residual, .. } => residual,
            NumericVerdict::NoWitness { best_residual } => best_residual,
        }
    }
}

fn exp_algebra(gens: &[CMat], coeffs: &[f64]) -> CMat {
    let n = gens[0].nrows();
    let mut x = CMat::zeros(n, n);
    for (g, &a) in gens.iter().zip(coeffs) {
        x += g * c(a, 0.0);
    }
    x.exp()
}

struct Problem<'a> {
    gens: &'a [CMat],
    diags: Vec<CMat>,
}

impl Problem<'_> {
    fn factors(&self, us: &[CMat]) -> Vec<CMat> {
        us.iter()
            .zip(&self.diags)
            .map(|(u, d)| u * d * u.adjoint())
            .collect()
    }

    fn residual(&self, us: &[CMat]) -> (Vec<CMat>, CMat) {
        let f = self.factors(us);
        let n = f[0].nrows();
        let p = f.iter().fold(CMat::identity(n, n), |acc, m| acc * m);
        (f, p - CMat::identity(n, n))
    }

    fn realify(m: &CMat) -> Vec<f64> {
        m.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    /// One LM run from the given start; returns the final `‖P - I‖_F`.
    fn solve(&self, mut us: Vec<CMat>, opts: &OracleOptions) -> f64 {
        let n = us.len();
        let g = self.gens.len();
        let nparams = (n - 1) * g;
        let mut lambda = 1e-3;
        let (mut f, mut r) = self.residual(&us);
        let mut cost = r.norm_squared();
        let mut stalls = 0;
        for _ in 0..opts.max_iters {
            if cost.sqrt() < opts.tol {
                break;
            }
            let dim = f[0].nrows();
            // Prefix and suffix products of the factors.
            let mut pre = vec![CMat::identity(dim, dim); n + 1];
            for k in 0..n {
                pre[k + 1] = &pre[k] * &f[k];
            }
            let mut suf = vec![CMat::identity(dim, dim); n + 1];
            for k in (0..n).rev() {
                suf[k] = &f[k] * &suf[k + 1];
            }
            let rows = 2 * dim * dim;
            let mut jac = DMatrix::<f64>::zeros(rows, nparams);
            for k in 1..n {
                let left = &pre[k] * &us[k];
                let right = us[k].adjoint() * &suf[k + 1];
                let d = &self.diags[k];
                for (a, x) in self.gens.iter().enumerate() {
                    let comm = x * d - d * x;
                    let col = Self::realify(&(&left * comm * &right));
                    for (row, v) in col.into_iter().enumerate() {
                        jac[(row, (k - 1) * g + a)] = v;
                    }
                }
            }
            let rv = DVector::from_vec(Self::realify(&r));
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let grad = &jt * &rv;
            let mut improved = false;
            for _ in 0..12 {
                let mut lhs = jtj.clone();
                for i in 0..nparams {
                    lhs[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
                }
                let Some(step) = lhs.cholesky().map(|ch| ch.solve(&(-&grad))) else {
                    lambda *= 10.0;
                    continue;
                };
                let trial: Vec<CMat> = us
                    .iter()
                    .enumerate()
                    .map(|(k, u)| {
                        if k == 0 {
                            u.clone()
                        } else {
                            let s: Vec<f64> = step.as_slice()[(k - 1) * g..k * g].to_vec();
                            u * exp_algebra(self.gens, &s)
                        }
                    })
                    .collect();
                let (tf, tr) = self.residual(&trial);
                let tc = tr.norm_squared();
                if tc < cost {
                    let rel = (cost - tc) / cost.max(1e-300);
                    stalls = if rel < 1e-10 { stalls + 1 } else { 0 };
                    us = trial;
                    f = tf;
                    r = tr;
                    cost = tc;
                    lambda = (lambda / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !improved || stalls > 5 {
                break;
            }
        }
        cost.sqrt()
    }
}

/// Seeded search for unitaries with `Π_k U_k Exp(2πiμ_k) U_k^{-1} = I`.
/// Restarts run in fixed-size batches; the verdict is the lowest-indexed
/// restart reaching `tol`, or the minimum residual over all restarts.
pub fn numeric_membership(rep: &GroupRep, points: &[CartanPoint], opts: &OracleOptions) -> Result<NumericVerdict> {
    if points.len() < 2 {
        return Err(Error::BadArity {
            min: 2,
            got: points.len(),
        });
    }
    let alcove = Alcove::new(&rep.rs);
    for (k, p) in points.iter().enumerate() {
        alcove.check(p, k + 1)?;
    }
    let problem = Problem {
        gens: &rep.generators,
        diags: points.iter().map(|p| rep.exp_diag(p)).collect(),
    };
    let n = points.len();
    let dim = rep.dim();
    let run = |restart: usize| -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(restart as u64);
        let us: Vec<CMat> = (0..n)
            .map(|k| {
                if k == 0 {
                    CMat::identity(dim, dim)
                } else {
                    let coeffs: Vec<f64> = (0..rep.generators.len())
                        .map(|_| rng.random_range(-PI..PI))
                        .collect();
                    exp_algebra(&rep.generators, &coeffs)
                }
            })
            .collect();
        problem.solve(us, opts)
    };
    const BATCH: usize = 8;
    let mut best = f64::INFINITY;
    let mut start = 0;
    while start < opts.restarts {
        let end = (start + BATCH).min(opts.restarts);
        let res: Vec<f64> = (start..end).into_par_iter().map(run).collect();
        if let Some((i, &r)) = res.iter().enumerate().find(|(_, &r)| r < opts.tol) {
            return Ok(NumericVerdict::Feasible {
                residual: r,
                restart: start + i,
            });
        }
        best = res.into_iter().fold(best, f64::min);
        start = end;
    }
    Ok(NumericVerdict::NoWitness { best_residual: best })
}

/// SU(2): `t_k ∈ [0, 1/2]` is feasible iff every odd subset `S` satisfies
/// `Σ_S t - Σ_{S^c} t <= (|S| - 1)/2`.
pub fn su2_reference_membership(ts: &[Rational]) -> Result<bool> {
    if let Some(t) = ts.iter().find(|t| t.is_negative() || **t > rat(1, 2)) {
        return Err(Error::OutOfRange(crate::rational::format_rational(t)));
    }
    let n = ts.len();
    for mask in 0u64..(1 << n) {
        let size = mask.count_ones() as i64;
        if size % 2 == 0 {
            continue;
        }
        let lhs = ts.iter().enumerate().fold(int(0), |acc, (k, t)| {
            if mask >> k & 1 == 1 {
                acc + t
            } else {
                acc - t
            }
        });
        if lhs > rat(size - 1, 2) {
            return Ok(false);
        }
    }
    Ok(true)
}
