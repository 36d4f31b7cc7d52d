//! Principal minors of `Φ_W(ψψ†)` and the brute-force positivity oracle.
//!
//! For `|ψ_i|² = x_i` the image is `diag(z) − ψψ†` with `z = W x`, so its
//! principal minor on `I` is `Π_I z_i − Σ_I x_i Π_{I∖i} z_j`, independent of
//! the phases of `ψ`. The map is positive iff all seven minors are
//! nonnegative on the simplex.

use std::cmp::Ordering;

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conditions::SimplexPoint;
use crate::error::{Error, Result};
use crate::map::GeneralizedMap;

/// Nonempty subset of `{1, 2, 3}`, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet(u8);

impl IndexSet {
    /// All nonempty subsets; the full set comes first, which is also the
    /// tie-break order of the oracle.
    pub const ALL: [IndexSet; 7] = [
        IndexSet(0b111),
        IndexSet(0b011),
        IndexSet(0b101),
        IndexSet(0b110),
        IndexSet(0b001),
        IndexSet(0b010),
        IndexSet(0b100),
    ];

    /// From 1-based indices.
    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u8;
        for &i in indices {
            if !(1..=3).contains(&i) {
                return Err(Error::IndexOutOfRange { index: i });
            }
            mask |= 1 << (i - 1);
        }
        if mask == 0 {
            return Err(Error::EmptyIndexSet);
        }
        Ok(Self(mask))
    }

    pub fn full() -> Self {
        Self(0b111)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// 1-based members in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        (0..3).filter(|i| self.contains(*i)).map(|i| i + 1).collect()
    }

    fn rank(&self) -> usize {
        Self::ALL.iter().position(|s| s == self).unwrap_or(7)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        IndexSet::new(&v).map_err(serde::de::Error::custom)
    }
}

#[inline]
fn minor_with_z(set: IndexSet, x: &[f64; 3], z: &[f64; 3]) -> f64 {
    let mut prod = 1.0;
    let mut sum = 0.0;
    for i in 0..3 {
        if !set.contains(i) {
            continue;
        }
        prod *= z[i];
        let mut rest = x[i];
        for j in 0..3 {
            if j != i && set.contains(j) {
                rest *= z[j];
            }
        }
        sum += rest;
    }
    prod - sum
}

#[inline]
fn image_diag(w: &Matrix3<f64>, x: &[f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| w[(i, 0)] * x[0] + w[(i, 1)] * x[1] + w[(i, 2)] * x[2])
}

/// `M_I(x)` for 1-based indices `I`.
pub fn minor(map: &GeneralizedMap, indices: &[usize], x: &SimplexPoint) -> Result<f64> {
    let set = IndexSet::new(indices)?;
    Ok(minor_of(map, set, x))
}

pub fn minor_of(map: &GeneralizedMap, set: IndexSet, x: &SimplexPoint) -> f64 {
    let x = x.coords();
    minor_with_z(set, &x, &image_diag(map.matrix(), &x))
}

/// Result of [`min_minor_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MinorScan {
    pub min_value: f64,
    pub argmin: SimplexPoint,
    pub index_set: IndexSet,
}

#[derive(Clone, Copy)]
struct Candidate {
    value: f64,
    set: IndexSet,
    x: [f64; 3],
}

impl Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.set.rank().cmp(&other.set.rank()))
            .then(self.x[0].total_cmp(&other.x[0]))
            .then(self.x[1].total_cmp(&other.x[1]))
            .then(self.x[2].total_cmp(&other.x[2]))
    }

    fn better(self, other: Self) -> Self {
        if other.cmp(&self) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

/// Per-set bests: overall, and on each face `x_m = 0`.
#[derive(Clone, Copy)]
struct Bests {
    inner: [Option<Candidate>; 7],
    faces: [[Option<Candidate>; 3]; 7],
}

impl Bests {
    fn empty() -> Self {
        Self { inner: [None; 7], faces: [[None; 3]; 7] }
    }

    fn push(slot: &mut Option<Candidate>, c: Candidate) {
        *slot = Some(match *slot {
            Some(old) => old.better(c),
            None => c,
        });
    }

    fn merge(mut self, other: Self) -> Self {
        for s in 0..7 {
            if let Some(c) = other.inner[s] {
                Self::push(&mut self.inner[s], c);
            }
            for m in 0..3 {
                if let Some(c) = other.faces[s][m] {
                    Self::push(&mut self.faces[s][m], c);
                }
            }
        }
        self
    }
}

/// Coordinate descent on the simplex along `e_p − e_q`, clipped to stay
/// feasible, halving the step until it drops below `1e−12`.
fn refine(w: &Matrix3<f64>, set: IndexSet, start: [f64; 3], step0: f64) -> Candidate {
    let eval = |x: &[f64; 3]| minor_with_z(set, x, &image_diag(w, x));
    let mut x = start;
    let mut best = eval(&x);
    let mut step = step0;
    const DIRS: [(usize, usize); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];
    while step >= 1e-12 {
        let mut improved = true;
        let mut guard = 0;
        while improved && guard < 10_000 {
            improved = false;
            guard += 1;
            for (p, q) in DIRS {
                let t = step.min(x[q]);
                if t <= 0.0 {
                    continue;
                }
                let mut y = x;
                y[p] += t;
                y[q] -= t;
                if y[q] < 1e-15 {
                    y[q] = 0.0;
                }
                let v = eval(&y);
                if v < best {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        step *= 0.5;
    }
    Candidate { value: best, set, x }
}

/// Global minimum of the seven principal minors over the simplex: a
/// barycentric grid with `resolution` subdivisions per edge followed by
/// local refinement from the best grid point of each minor, overall and on
/// each boundary face.
pub fn min_minor_scan(map: &GeneralizedMap, resolution: usize) -> Result<MinorScan> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!("resolution {resolution} < 2")));
    }
    let w = *map.matrix();
    let n = resolution;
    let inv = 1.0 / n as f64;
    let bests = (0..=n)
        .into_par_iter()
        .map(|i| {
            let mut b = Bests::empty();
            for j in 0..=(n - i) {
                let k = n - i - j;
                let x = [i as f64 * inv, j as f64 * inv, k as f64 * inv];
                let z = image_diag(&w, &x);
                for (s, set) in IndexSet::ALL.iter().enumerate() {
                    let c = Candidate { value: minor_with_z(*set, &x, &z), set: *set, x };
                    Bests::push(&mut b.inner[s], c);
                    for (m, zero) in [i, j, k].iter().enumerate() {
                        if *zero == 0 {
                            Bests::push(&mut b.faces[s][m], c);
                        }
                    }
                }
            }
            b
        })
        .reduce(Bests::empty, Bests::merge);

    let starts: Vec<Candidate> = (0..7)
        .flat_map(|s| {
            std::iter::once(bests.inner[s]).chain(bests.faces[s].iter().copied())
        })
        .flatten()
        .collect();
    let best = starts
        .par_iter()
        .map(|c| refine(&w, c.set, c.x, inv).better(*c))
        .reduce_with(Candidate::better)
        .expect("grid is nonempty");
    Ok(MinorScan {
        min_value: best.value,
        argmin: SimplexPoint::from_unchecked(best.x),
        index_set: best.set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn minor_examples() {
        let red = GeneralizedMap::reduction();
        let x = SimplexPoint::new(0.2, 0.3, 0.5).unwrap();
        assert_abs_diff_eq!(minor(&red, &[1], &x).unwrap(), 0.8, epsilon = 1e-15);

        let choi = GeneralizedMap::choi();
        let v = minor(&choi, &[1, 2, 3], &SimplexPoint::CENTER).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);

        let bad = GeneralizedMap::circulant(1.0, 0.5, 0.5).unwrap();
        let v = minor(&bad, &[1, 2, 3], &SimplexPoint::CENTER).unwrap();
        assert_abs_diff_eq!(v, -4.0 / 27.0, epsilon = 1e-15);

        assert_eq!(minor(&red, &[], &x), Err(Error::EmptyIndexSet));
    }

    #[test]
    fn scan_examples() {
        let s = min_minor_scan(&GeneralizedMap::choi(), 60).unwrap();
        assert!(s.min_value.abs() < 1e-8, "{}", s.min_value);

        let s = min_minor_scan(&GeneralizedMap::circulant(1.0, 0.5, 0.5).unwrap(), 60).unwrap();
        assert!(s.min_value < -1e-3);

        let s = min_minor_scan(&GeneralizedMap::reduction(), 60).unwrap();
        assert_eq!(s.min_value, 0.0);
        assert_eq!(s.index_set, IndexSet::full());

        assert!(min_minor_scan(&GeneralizedMap::choi(), 1).is_err());
    }

    #[test]
    fn scan_is_deterministic() {
        let m = GeneralizedMap::new(1.3, 0.6, 0.9, 0.1, -0.3, 0.2).unwrap();
        let a = min_minor_scan(&m, 40).unwrap();
        let b = min_minor_scan(&m, 40).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn index_set_json() {
        let s = serde_json::to_string(&IndexSet::new(&[3, 1]).unwrap()).unwrap();
        assert_eq!(s, "[1,3]");
    }
}
