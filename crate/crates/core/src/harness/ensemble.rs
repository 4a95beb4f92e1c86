//! Random instances: matrix ensembles, scalar pairs and vectors.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{normalized, polar, CMatrix, CVector};
use crate::scalar::ComplexScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    Ginibre,
    Hermitian,
    Unitary,
    Psd,
    NilpotentLike,
}

impl Ensemble {
    pub const ALL: [Ensemble; 5] =
        [Ensemble::Ginibre, Ensemble::Hermitian, Ensemble::Unitary, Ensemble::Psd, Ensemble::NilpotentLike];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Ginibre => "ginibre",
            Ensemble::Hermitian => "hermitian",
            Ensemble::Unitary => "unitary",
            Ensemble::Psd => "psd",
            Ensemble::NilpotentLike => "nilpotent-like",
        }
    }

    /// Whether matrices of this ensemble are invertible with probability one.
    pub fn generically_invertible(self) -> bool {
        !matches!(self, Ensemble::NilpotentLike)
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown ensemble kind '{s}'")))
    }
}

/// What [`gen_instance`] should draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Matrix(Ensemble),
    ScalarPair,
    UnitVector,
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scalar-pair" => Ok(InstanceKind::ScalarPair),
            "unit-vector" => Ok(InstanceKind::UnitVector),
            other => other.parse().map(InstanceKind::Matrix),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Instance {
    Matrix(CMatrix),
    ScalarPair(ComplexScalar, ComplexScalar),
    Vector(CVector),
}

/// Standard complex Gaussian: `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Haar-uniform point on the unit sphere of `ℂⁿ`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    loop {
        if let Some(v) = normalized(&gaussian_vector(rng, n)) {
            return v;
        }
    }
}

/// Uniform point in the closed disk of the given radius.
pub fn point_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> ComplexScalar {
    let r = radius * rng.random::<f64>().sqrt();
    let phi = rng.random::<f64>() * std::f64::consts::TAU;
    ComplexScalar::from_polar(r, phi)
}

/// Uniform draw from the open interval `(0, 1)`.
pub fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let t: f64 = rng.random();
        if t > 0.0 {
            return t;
        }
    }
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

pub fn gen_matrix<R: Rng + ?Sized>(rng: &mut R, kind: Ensemble, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
    }
    let g = ginibre(rng, n);
    Ok(match kind {
        Ensemble::Ginibre => g,
        Ensemble::Hermitian => g.hermitian_part(),
        Ensemble::Unitary => polar(&g)?.unitary,
        Ensemble::Psd => (&g.adjoint() * &g).hermitian_part(),
        Ensemble::NilpotentLike => CMatrix::from_fn(n, n, |i, j| if j > i { g[(i, j)] } else { Complex64::new(0.0, 0.0) }),
    })
}

/// Draws one instance; `dim` is ignored for scalar pairs, which use `scale`
/// as the disk radius.
pub fn gen_instance<R: Rng + ?Sized>(rng: &mut R, kind: InstanceKind, dim: usize, scale: f64) -> Result<Instance> {
    Ok(match kind {
        InstanceKind::Matrix(e) => Instance::Matrix(gen_matrix(rng, e, dim)?),
        InstanceKind::ScalarPair => Instance::ScalarPair(point_in_disk(rng, scale), point_in_disk(rng, scale)),
        InstanceKind::UnitVector => {
            if dim == 0 {
                return Err(Error::InvalidArgument("vector dimension must be positive".into()));
            }
            Instance::Vector(unit_vector(rng, dim))
        }
    })
}
