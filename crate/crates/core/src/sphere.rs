//! Random sampling of the unit sub-Riemannian sphere.
//!
//! Parameters are drawn from a seeded ChaCha stream, scaled onto the unit
//! level set `H = ½`, and pushed to time 1 by the closed-form geodesic.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dynamics::{geodesic_point, normalize, GeodesicParams};
use crate::group::GroupPoint;
use crate::scalar::Real;
use crate::symmetry::canonicalize;

/// Which geodesics to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SphereFamily {
    /// Generic parameters in all seven directions.
    All,
    /// `K = 0`.
    Line,
    /// `C₃ = C₄ = 0`, so the geodesic lies in C_n.
    InCn,
    /// Generic parameters with `C̄₃` bounded away from zero.
    OffCn,
}

impl FromStr for SphereFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(Self::All),
            "line" => Ok(Self::Line),
            "incn" => Ok(Self::InCn),
            "offcn" => Ok(Self::OffCn),
            other => Err(format!("unknown family `{other}` (all, line, incn, offcn)")),
        }
    }
}

/// A coordinate of the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coord {
    X,
    L1,
    L2,
    L3,
    Y1,
    Y2,
    Y3,
}

impl Coord {
    pub const ALL: [Coord; 7] = [Coord::X, Coord::L1, Coord::L2, Coord::L3, Coord::Y1, Coord::Y2, Coord::Y3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x", "l1", "l2", "l3", "y1", "y2", "y3"][self.index()]
    }

    pub fn get<T: Real>(self, q: &GroupPoint<T>) -> T {
        q.to_array()[self.index()]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Coord::ALL
            .into_iter()
            .find(|c| c.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown coordinate `{s}` (x, l1..l3, y1..y3)"))
    }
}

/// Projection onto some coordinates, optionally keeping only points whose
/// other coordinates are within `band` of zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub keep: Vec<Coord>,
    pub band: Option<f64>,
}

impl Slice {
    /// Parses a comma separated coordinate list such as `x,l1,y1`.
    pub fn parse(keep: &str, band: Option<f64>) -> Result<Self, String> {
        let keep = keep.split(',').map(str::parse).collect::<Result<Vec<Coord>, _>>()?;
        if keep.is_empty() {
            return Err("empty slice".into());
        }
        Ok(Self { keep, band })
    }

    pub fn full() -> Self {
        Self { keep: Coord::ALL.to_vec(), band: None }
    }

    pub fn accepts<T: Real>(&self, q: &GroupPoint<T>) -> bool {
        match self.band {
            None => true,
            Some(b) => Coord::ALL
                .iter()
                .filter(|c| !self.keep.contains(c))
                .all(|c| c.get(q).abs() <= T::lit(b)),
        }
    }

    pub fn project<T: Real>(&self, q: &GroupPoint<T>) -> Vec<T> {
        self.keep.iter().map(|c| c.get(q)).collect()
    }
}

/// Sampled sphere points with the parameters that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereSample<T> {
    pub columns: Vec<Coord>,
    pub params: Vec<GeodesicParams<T>>,
    pub points: Vec<GroupPoint<T>>,
    /// Points accepted by the slice, projected onto `columns`.
    pub rows: Vec<Vec<T>>,
}

/// Minimum `C̄₃` accepted by [`SphereFamily::OffCn`].
const OFFCN_MIN_C3BAR: f64 = 1e-3;

fn gaussian<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    loop {
        let v: [f64; N] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.map(|a| a / n);
        }
    }
}

pub(crate) fn draw<T: Real>(family: SphereFamily, rng: &mut ChaCha8Rng) -> GeodesicParams<T> {
    loop {
        let a: [f64; 7] = match family {
            SphereFamily::All | SphereFamily::OffCn => gaussian::<7>(rng),
            SphereFamily::Line => {
                let c = gaussian::<4>(rng);
                [c[0], c[1], c[2], c[3], 0.0, 0.0, 0.0]
            }
            SphereFamily::InCn => {
                let v = gaussian::<5>(rng);
                [v[0], v[1], 0.0, 0.0, v[2], v[3], v[4]]
            }
        };
        let p = GeodesicParams::from_array(a.map(T::lit));
        let Ok(p) = normalize(&p) else { continue };
        if family == SphereFamily::OffCn {
            match canonicalize(&p) {
                Ok(cp) if cp.c3bar > T::lit(OFFCN_MIN_C3BAR) => {}
                _ => continue,
            }
        }
        return p;
    }
}

/// Draws `count` geodesics of `family` and evaluates them at time 1.
pub fn sphere_sample<T: Real>(count: usize, family: SphereFamily, slice: &Slice, seed: u64) -> SphereSample<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = Vec::with_capacity(count);
    let mut points = Vec::with_capacity(count);
    let mut rows = Vec::new();
    for _ in 0..count {
        let p = draw::<T>(family, &mut rng);
        let q = geodesic_point(T::one(), &p);
        if slice.accepts(&q) {
            rows.push(slice.project(&q));
        }
        params.push(p);
        points.push(q);
    }
    SphereSample { columns: slice.keep.clone(), params, points, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::level_residual;

    #[test]
    fn deterministic_for_a_seed() {
        let a = sphere_sample::<f64>(20, SphereFamily::All, &Slice::full(), 7);
        let b = sphere_sample::<f64>(20, SphereFamily::All, &Slice::full(), 7);
        let c = sphere_sample::<f64>(20, SphereFamily::All, &Slice::full(), 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn samples_lie_on_level_set() {
        for family in [SphereFamily::All, SphereFamily::Line, SphereFamily::InCn, SphereFamily::OffCn] {
            let s = sphere_sample::<f64>(50, family, &Slice::full(), 1);
            for p in &s.params {
                assert!(level_residual(p).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn line_samples_on_unit_sphere() {
        let s = sphere_sample::<f64>(50, SphereFamily::Line, &Slice::full(), 3);
        for q in &s.points {
            let r = (q.x * q.x + q.ell.iter().map(|v| v * v).sum::<f64>()).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
            assert_eq!(q.y, [0.0; 3]);
        }
    }

    #[test]
    fn slice_projection_and_band() {
        let slice = Slice::parse("x,y1", Some(0.0)).unwrap();
        assert_eq!(slice.keep, vec![Coord::X, Coord::Y1]);
        let q = GroupPoint::new(1.0, [0.0; 3], [2.0, 0.0, 0.0]);
        assert!(slice.accepts(&q));
        assert_eq!(slice.project(&q), vec![1.0, 2.0]);
        let q = GroupPoint::new(1.0, [0.1, 0.0, 0.0], [2.0, 0.0, 0.0]);
        assert!(!slice.accepts(&q));
        assert!(Slice::parse("x,z", None).is_err());
    }
}
