//! Exact root-system data for the simple types A–G in Bourbaki numbering.
//!
//! Weights are stored in fundamental-weight coordinates, roots in
//! simple-root coordinates, and points of the Cartan subalgebra by the values
//! `m_j = α_j(μ)` (so `μ = Σ m_j x_j`). All arithmetic is exact.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{dot, int, lcm_of_denominators, one, rat, zero, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    pub fn letter(self) -> char {
        match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::E => 'E',
            CartanType::F => 'F',
            CartanType::G => 'G',
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "E" => Ok(CartanType::E),
            "F" => Ok(CartanType::F),
            "G" => Ok(CartanType::G),
            _ => Err(Error::BadTypeLabel(s.to_string())),
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Splits a label such as `"G2"` into type and rank. A bare letter is
/// accepted only for `G` and `F`, whose rank is forced.
pub fn parse_type_label(label: &str) -> Result<(CartanType, Option<usize>)> {
    let label = label.trim();
    let mut chars = label.chars();
    let letter = chars
        .next()
        .ok_or_else(|| Error::BadTypeLabel(label.to_string()))?;
    let ty: CartanType = letter.to_string().parse()?;
    let rest = chars.as_str();
    if rest.is_empty() {
        return Ok((ty, None));
    }
    let rank = rest
        .parse::<usize>()
        .map_err(|_| Error::BadTypeLabel(label.to_string()))?;
    Ok((ty, Some(rank)))
}

/// An integral or rational weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub coords: Vec<Rational>,
}

impl Weight {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Self::new(vec![zero(); rank])
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut c = vec![zero(); rank];
        c[i] = one();
        Self::new(c)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> Weight {
        Weight::new(self.coords.iter().map(|a| a * s).collect())
    }
}

/// A point `μ = Σ_j m_j x_j` of the Cartan subalgebra, stored as `m_j = α_j(μ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartanPoint {
    pub coords: Vec<Rational>,
}

impl CartanPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`.
    cartan: Vec<Vec<i64>>,
    inverse_cartan: Matrix,
    positive_roots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
    highest_root: Vec<i64>,
    /// `⟨α_i, α_i⟩` for the simple roots, normalized so that `⟨θ, θ⟩ = 2`.
    simple_norms: Vec<Rational>,
    dual_coxeter: i64,
    coweight_orders: Vec<i64>,
}

fn dynkin_data(ty: CartanType, rank: usize) -> Result<(Vec<i64>, Vec<(usize, usize)>)> {
    let invalid = |reason: &str| Error::InvalidType {
        label: ty.to_string(),
        rank,
        reason: reason.to_string(),
    };
    let chain = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    // Unnormalized squared lengths: only ratios matter.
    let data = match ty {
        CartanType::A => {
            if rank < 1 {
                return Err(invalid("rank must be at least 1"));
            }
            (vec![1; rank], chain(rank))
        }
        CartanType::B => {
            if rank < 2 {
                return Err(invalid("rank must be at least 2"));
            }
            let mut len = vec![2; rank];
            len[rank - 1] = 1;
            (len, chain(rank))
        }
        CartanType::C => {
            if rank < 2 {
                return Err(invalid("rank must be at least 2"));
            }
            let mut len = vec![1; rank];
            len[rank - 1] = 2;
            (len, chain(rank))
        }
        CartanType::D => {
            if rank < 4 {
                return Err(invalid("rank must be at least 4"));
            }
            let mut edges = chain(rank - 1);
            edges.push((rank - 3, rank - 1));
            (vec![1; rank], edges)
        }
        CartanType::E => {
            if !(6..=8).contains(&rank) {
                return Err(invalid("rank must be 6, 7 or 8"));
            }
            let mut edges = vec![(0, 2), (1, 3), (2, 3)];
            edges.extend((3..rank - 1).map(|i| (i, i + 1)));
            (vec![1; rank], edges)
        }
        CartanType::F => {
            if rank != 4 {
                return Err(invalid("rank must be 4"));
            }
            (vec![2, 2, 1, 1], chain(4))
        }
        CartanType::G => {
            if rank != 2 {
                return Err(invalid("rank must be 2"));
            }
            (vec![1, 3], vec![(0, 1)])
        }
    };
    Ok(data)
}

fn expected_positive_roots(ty: CartanType, l: usize) -> usize {
    match ty {
        CartanType::A => l * (l + 1) / 2,
        CartanType::B | CartanType::C => l * l,
        CartanType::D => l * (l - 1),
        CartanType::E => match l {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        CartanType::F => 24,
        CartanType::G => 6,
    }
}

impl RootSystem {
    pub fn new(ty: CartanType, rank: usize) -> Result<Self> {
        let (lengths, edges) = dynkin_data(ty, rank)?;
        let mut cartan = vec![vec![0i64; rank]; rank];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in &edges {
            let inner = -lengths[a].max(lengths[b]);
            // ⟨α_j, α_i^∨⟩ = 2⟨α_i, α_j⟩ / ⟨α_i, α_i⟩ with ⟨α_a, α_b⟩ = inner / 2.
            cartan[a][b] = inner / lengths[a];
            cartan[b][a] = inner / lengths[b];
        }
        Self::from_cartan(ty, cartan)
    }

    /// Builds from a label such as `"B2"`; `"G"` and `"F"` imply their rank.
    pub fn from_label(label: &str) -> Result<Self> {
        let (ty, rank) = parse_type_label(label)?;
        let rank = match (ty, rank) {
            (_, Some(r)) => r,
            (CartanType::G, None) => 2,
            (CartanType::F, None) => 4,
            _ => return Err(Error::BadTypeLabel(label.to_string())),
        };
        Self::new(ty, rank)
    }

    fn from_cartan(ty: CartanType, cartan: Vec<Vec<i64>>) -> Result<Self> {
        let rank = cartan.len();
        let cm: Matrix = cartan
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        let inverse_cartan = linalg::inverse(&cm)
            .ok_or_else(|| Error::Internal(format!("singular Cartan matrix for {ty}{rank}")))?;

        let positive_roots = root_strings(&cartan);
        if positive_roots.len() != expected_positive_roots(ty, rank) {
            return Err(Error::Internal(format!(
                "{ty}{rank}: root-string closure produced {} positive roots",
                positive_roots.len()
            )));
        }
        let root_index = positive_roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let highest_root = positive_roots
            .iter()
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
            .expect("nonempty root system");
        if !positive_roots
            .iter()
            .all(|r| r.iter().zip(&highest_root).all(|(a, b)| a <= b))
        {
            return Err(Error::Internal(format!("{ty}{rank}: no dominating highest root")));
        }

        // Propagate ⟨α_j,α_j⟩ = ⟨α_i,α_i⟩·cartan[i][j]/cartan[j][i] along edges.
        let mut norms: Vec<Option<Rational>> = vec![None; rank];
        norms[0] = Some(one());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in 0..rank {
                if i != j && cartan[i][j] != 0 && norms[j].is_none() {
                    let ni = norms[i].clone().unwrap();
                    norms[j] = Some(ni * rat(cartan[i][j], cartan[j][i]));
                    queue.push_back(j);
                }
            }
        }
        let mut simple_norms: Vec<Rational> = norms
            .into_iter()
            .map(|n| n.ok_or_else(|| Error::Internal("disconnected Dynkin diagram".into())))
            .collect::<Result<_>>()?;
        let theta_norm = gram_norm(&cartan, &simple_norms, &highest_root);
        let scale = int(2) / theta_norm;
        for n in simple_norms.iter_mut() {
            *n *= &scale;
        }

        // g* = 1 + ρ(θ^∨), θ^∨ = Σ θ_j (⟨α_j,α_j⟩/⟨θ,θ⟩) α_j^∨ and ρ(α_j^∨) = 1.
        let rho_theta: Rational = highest_root
            .iter()
            .zip(&simple_norms)
            .map(|(&t, n)| int(t) * n / int(2))
            .fold(zero(), |a, b| a + b);
        let dual_coxeter = crate::rational::as_i64(&(rho_theta + one()))
            .ok_or_else(|| Error::Internal("non-integral dual Coxeter number".into()))?;

        // x_j = Σ_i (C^{-1})[j][i] α_i^∨.
        let coweight_orders = (0..rank)
            .map(|j| {
                let l = lcm_of_denominators(&inverse_cartan[j]);
                i64::try_from(l).map_err(|_| Error::Internal("huge coweight order".into()))
            })
            .collect::<Result<_>>()?;

        Ok(Self {
            cartan_type: ty,
            rank,
            cartan,
            inverse_cartan,
            positive_roots,
            root_index,
            highest_root,
            simple_norms,
            dual_coxeter,
            coweight_orders,
        })
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.cartan_type, self.rank)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn inverse_cartan(&self) -> &Matrix {
        &self.inverse_cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.highest_root
    }

    pub fn simple_norms(&self) -> &[Rational] {
        &self.simple_norms
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    /// `N_j`: the smallest positive integer with `N_j x_j` in the coroot lattice.
    pub fn coweight_orders(&self) -> &[i64] {
        &self.coweight_orders
    }

    /// `ρ`, all ones in fundamental-weight coordinates.
    pub fn rho(&self) -> Weight {
        Weight::from_ints(&vec![1; self.rank])
    }

    /// The element `x_j` in simple-coroot coordinates.
    pub fn x_in_coroots(&self, j: usize) -> Vec<Rational> {
        self.inverse_cartan[j].clone()
    }

    /// `⟨β, α_i^∨⟩` for a root (or any vector) in simple-root coordinates.
    pub fn pair_root_coroot(&self, beta: &[i64], i: usize) -> i64 {
        self.cartan[i].iter().zip(beta).map(|(c, b)| c * b).sum()
    }

    /// Converts simple-root coordinates to fundamental-weight coordinates.
    pub fn root_to_weight(&self, beta: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|j| self.pair_root_coroot(beta, j))
            .collect()
    }

    pub fn root_weight(&self, beta: &[i64]) -> Weight {
        Weight::from_ints(&self.root_to_weight(beta))
    }

    /// Simple-root coordinates of a weight; coordinate `j` is `λ(x_j)`.
    pub fn weight_to_root(&self, w: &Weight) -> Vec<Rational> {
        linalg::mat_vec(&self.inverse_cartan, &w.coords)
    }

    /// `λ(x_j)` for every `j`.
    pub fn weight_on_x(&self, w: &Weight) -> Vec<Rational> {
        self.weight_to_root(w)
    }

    /// `⟨λ, μ⟩` in the normalized invariant form.
    pub fn killing_form(&self, a: &Weight, b: &Weight) -> Rational {
        // ⟨ω_i, α_j⟩ = δ_ij ⟨α_j,α_j⟩/2.
        let b_root = self.weight_to_root(b);
        a.coords
            .iter()
            .zip(&b_root)
            .zip(&self.simple_norms)
            .map(|((x, y), n)| x * y * n / int(2))
            .fold(zero(), |s, t| s + t)
    }

    /// `⟨β, β⟩` for a vector in simple-root coordinates.
    pub fn root_norm(&self, beta: &[i64]) -> Rational {
        gram_norm(&self.cartan, &self.simple_norms, beta)
    }

    /// The coroot `β^∨` of a root, in simple-coroot coordinates.
    pub fn coroot(&self, beta: &[i64]) -> Vec<Rational> {
        let n = self.root_norm(beta);
        beta.iter()
            .zip(&self.simple_norms)
            .map(|(&b, s)| int(b) * s / &n)
            .collect()
    }

    /// `λ(β^∨)` for a weight and a root.
    pub fn weight_on_coroot(&self, w: &Weight, beta: &[i64]) -> Rational {
        dot(&w.coords, &self.coroot(beta))
    }

    /// `κ(λ)`: the Cartan point with `m_j = ⟨α_j, λ⟩`.
    pub fn kappa(&self, w: &Weight) -> CartanPoint {
        CartanPoint::new(
            w.coords
                .iter()
                .zip(&self.simple_norms)
                .map(|(c, n)| c * n / int(2))
                .collect(),
        )
    }

    pub fn kappa_inv(&self, p: &CartanPoint) -> Weight {
        Weight::new(
            p.coords
                .iter()
                .zip(&self.simple_norms)
                .map(|(m, n)| m * int(2) / n)
                .collect(),
        )
    }

    /// `⟨h, h'⟩` on the Cartan subalgebra, transported through `κ`.
    pub fn cartan_form(&self, h: &CartanPoint, h2: &CartanPoint) -> Rational {
        self.killing_form(&self.kappa_inv(h), &self.kappa_inv(h2))
    }

    /// `λ(μ) = Σ_j m_j λ(x_j)`.
    pub fn evaluate(&self, w: &Weight, p: &CartanPoint) -> Rational {
        dot(&self.weight_on_x(w), &p.coords)
    }

    /// Coordinates `m_j` of the coroot vector `Σ c_i α_i^∨`.
    pub fn coroot_point(&self, coroot_coords: &[Rational]) -> CartanPoint {
        CartanPoint::new(
            (0..self.rank)
                .map(|j| {
                    coroot_coords
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c * int(self.cartan[i][j]))
                        .fold(zero(), |a, b| a + b)
                })
                .collect(),
        )
    }

    /// The point `x_j` itself (`m = e_j`).
    pub fn x_point(&self, j: usize) -> CartanPoint {
        let mut c = vec![zero(); self.rank];
        c[j] = one();
        CartanPoint::new(c)
    }

    /// `Σ_{α ∈ R} α(h) α(h')`.
    pub fn trace_form(&self, h: &CartanPoint, h2: &CartanPoint) -> Rational {
        let sum = self
            .positive_roots
            .iter()
            .map(|r| {
                let a = dot(&r.iter().map(|&x| int(x)).collect::<Vec<_>>(), &h.coords);
                let b = dot(&r.iter().map(|&x| int(x)).collect::<Vec<_>>(), &h2.coords);
                a * b
            })
            .fold(zero(), |a, b| a + b);
        sum * int(2)
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        w.coords.iter().all(|c| !c.is_negative())
    }
}

fn gram_norm(cartan: &[Vec<i64>], norms: &[Rational], beta: &[i64]) -> Rational {
    // ⟨α_i, α_j⟩ = cartan[i][j] ⟨α_i,α_i⟩ / 2.
    let l = cartan.len();
    let mut s = zero();
    for i in 0..l {
        if beta[i] == 0 {
            continue;
        }
        for j in 0..l {
            if beta[j] == 0 || cartan[i][j] == 0 {
                continue;
            }
            s += int(beta[i] * beta[j] * cartan[i][j]) * &norms[i] / int(2);
        }
    }
    s
}

/// Positive roots by breadth-first root strings from the simple roots,
/// ordered by height and then lexicographically.
fn root_strings(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let l = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..l)
        .map(|i| {
            let mut v = vec![0; l];
            v[i] = 1;
            v
        })
        .collect();
    let mut known: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut level = roots.clone();
    while !level.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &level {
            for i in 0..l {
                // p = largest k with β - kα_i a root.
                let mut p = 0;
                loop {
                    let mut cand = beta.clone();
                    cand[i] -= p + 1;
                    if known.contains(&cand) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = cartan[i].iter().zip(beta).map(|(c, b)| c * b).sum();
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        roots.extend(next.iter().cloned());
        level = next;
    }
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(label: &str) -> RootSystem {
        RootSystem::from_label(label).unwrap()
    }

    #[test]
    fn small_types() {
        let a1 = rs("A1");
        assert_eq!(a1.positive_roots().len(), 1);
        assert_eq!(a1.highest_root(), &[1]);
        assert_eq!(a1.dual_coxeter(), 2);

        let b2 = rs("B2");
        assert_eq!(b2.positive_roots().len(), 4);
        assert_eq!(b2.highest_root(), &[1, 2]);
        assert_eq!(b2.dual_coxeter(), 3);
        assert_eq!(b2.cartan(), &[vec![2, -1], vec![-2, 2]]);

        let g2 = rs("G2");
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(g2.highest_root(), &[3, 2]);
        assert_eq!(g2.dual_coxeter(), 4);
    }

    #[test]
    fn invalid_types_are_rejected() {
        assert!(matches!(RootSystem::from_label("H2"), Err(Error::BadTypeLabel(_))));
        assert!(matches!(
            RootSystem::new(CartanType::G, 3),
            Err(Error::InvalidType { .. })
        ));
        assert!(RootSystem::new(CartanType::D, 3).is_err());
        assert!(RootSystem::new(CartanType::A, 0).is_err());
    }

    #[test]
    fn dual_coxeter_numbers() {
        for (label, g) in [
            ("A3", 4),
            ("B3", 5),
            ("C3", 4),
            ("D4", 6),
            ("F4", 9),
            ("E6", 12),
            ("E7", 18),
            ("E8", 30),
        ] {
            assert_eq!(rs(label).dual_coxeter(), g, "{label}");
        }
    }

    #[test]
    fn form_normalization() {
        let g2 = rs("G2");
        let a1 = g2.root_weight(&[1, 0]);
        assert_eq!(g2.killing_form(&a1, &a1), rat(2, 3));
        let theta = g2.root_weight(g2.highest_root());
        assert_eq!(g2.killing_form(&theta, &theta), int(2));

        let b2 = rs("B2");
        let a2 = b2.root_weight(&[0, 1]);
        assert_eq!(b2.killing_form(&a2, &a2), int(1));

        let a1 = rs("A1");
        let a = a1.root_weight(&[1]);
        assert_eq!(a1.killing_form(&a, &a), int(2));
    }

    #[test]
    fn kappa_of_fundamental_weights() {
        let g2 = rs("G2");
        let p = g2.kappa(&Weight::fundamental(2, 0));
        assert_eq!(p.coords, vec![rat(1, 3), zero()]);
        let a1 = rs("A1");
        assert_eq!(a1.kappa(&Weight::fundamental(1, 0)).coords, vec![one()]);
    }

    #[test]
    fn x_j_dual_to_simple_roots() {
        for label in ["A3", "B3", "C3", "G2", "F4"] {
            let r = rs(label);
            for j in 0..r.rank() {
                let x = r.x_point(j);
                let back = r.coroot_point(&r.x_in_coroots(j));
                assert_eq!(x, back, "{label} x_{j}");
            }
        }
    }

    #[test]
    fn coweight_orders_match_fundamental_group() {
        // x_j in the coroot lattice up to the index of the coroot lattice.
        assert_eq!(rs("A1").coweight_orders(), &[2]);
        assert_eq!(rs("A3").coweight_orders(), &[4, 2, 4]);
        assert_eq!(rs("G2").coweight_orders(), &[1, 1]);
        assert_eq!(rs("B2").coweight_orders(), &[2, 1]);
    }
}
