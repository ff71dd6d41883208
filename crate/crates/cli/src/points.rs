//! Point files and sampled test points.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Deserializer};
use serde::Deserialize;

use qlevi_core::eigencone::{Alcove, Inequality};
use qlevi_core::rational::{parse_rational, rat, Rational};
use qlevi_core::root_system::{CartanPoint, RootSystem};

struct Coord(Rational);

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .map(Coord)
            .ok_or_else(|| de::Error::custom(format!("invalid rational {s:?} (expected \"p/q\")")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    points: Vec<Vec<Coord>>,
}

/// Reads `{"points": [["p/q", ...], ...]}`: one row of `α_j(μ_k)` per factor.
pub fn read_point_file(path: &Path, n: usize, rank: usize) -> anyhow::Result<Vec<CartanPoint>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file: PointFile =
        serde_json::from_str(&text).with_context(|| format!("{}: malformed point file", path.display()))?;
    if file.points.len() != n {
        bail!("{}: {} points given, expected n = {n}", path.display(), file.points.len());
    }
    file.points
        .into_iter()
        .enumerate()
        .map(|(k, row)| {
            if row.len() != rank {
                bail!("{}: point {} has {} coordinates, expected {rank}", path.display(), k + 1, row.len());
            }
            Ok(CartanPoint::new(row.into_iter().map(|c| c.0).collect()))
        })
        .collect()
}

const GRID: i64 = 60;

/// Seeded points on the `1/60` grid of the alcove whose slack against every
/// wall and every inequality is at least `margin`.
pub fn sample(
    rs: &RootSystem,
    ineqs: &[Inequality],
    n: usize,
    count: usize,
    margin: &Rational,
    seed: u64,
) -> Vec<Vec<CartanPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alcove = Alcove::new(rs);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let pts: Vec<CartanPoint> = (0..n)
            .map(|_| CartanPoint::new((0..rs.rank()).map(|_| rat(rng.random_range(0..=GRID), GRID)).collect()))
            .collect();
        if pts.iter().any(|p| !alcove.contains(p) || alcove.margin(p) < *margin) {
            continue;
        }
        if ineqs.iter().all(|q| {
            let s = &q.rhs - q.evaluate(&pts);
            s >= *margin || -s >= *margin
        }) {
            out.push(pts);
        }
    }
    out
}
