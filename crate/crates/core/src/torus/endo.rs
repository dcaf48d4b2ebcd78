use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::point::TorusPoint;
use crate::error::{Error, Result};
use crate::exactmath::quad::{common_field, rational_vector, QuadExt};
use crate::exactmath::rational::Rational;
use crate::exactmath::{IntMat, RatMat};

/// Affine map `x ↦ A·x + b` of `R^n / Z^n` with `A` integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusEndo {
    linear: IntMat,
    translation: Vec<QuadExt>,
    det: BigInt,
}

impl TorusEndo {
    pub fn new(linear: IntMat, translation: Vec<QuadExt>) -> Result<Self> {
        if !linear.is_square() {
            return Err(Error::Shape(format!("linear part is {}x{}", linear.rows(), linear.cols())));
        }
        if translation.len() != linear.rows() {
            return Err(Error::Shape(format!(
                "translation has length {}, expected {}",
                translation.len(),
                linear.rows()
            )));
        }
        common_field(&translation)?;
        let det = linear.det();
        Ok(Self { linear, translation, det })
    }

    pub fn linear_map(linear: IntMat) -> Result<Self> {
        let n = linear.rows();
        Self::new(linear, vec![QuadExt::zero(); n])
    }

    pub fn with_rational_translation(linear: IntMat, b: Vec<Rational>) -> Result<Self> {
        Self::new(linear, b.into_iter().map(QuadExt::rational).collect())
    }

    /// Rejects rational matrices that do not preserve `Z^n`.
    pub fn from_rational_linear(linear: &RatMat, translation: Vec<QuadExt>) -> Result<Self> {
        Self::new(linear.to_integral()?, translation)
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn linear(&self) -> &IntMat {
        &self.linear
    }

    pub fn translation(&self) -> &[QuadExt] {
        &self.translation
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn is_linear(&self) -> bool {
        self.translation.iter().all(QuadExt::is_zero)
    }

    pub fn is_singular(&self) -> bool {
        self.det.is_zero()
    }

    pub fn is_automorphism(&self) -> bool {
        self.det == BigInt::one() || self.det == -BigInt::one()
    }

    pub fn field(&self) -> Option<i64> {
        common_field(&self.translation).expect("validated at construction")
    }

    pub fn has_rational_translation(&self) -> bool {
        self.translation.iter().all(QuadExt::is_rational)
    }

    pub fn rational_translation(&self) -> Result<Vec<Rational>> {
        rational_vector(&self.translation).ok_or(Error::IrrationalTranslation)
    }

    /// `A·x + b` without reduction mod `Z^n`.
    pub fn apply_real(&self, x: &[QuadExt]) -> Vec<QuadExt> {
        let ax = self.linear.to_rational().mul_quad_vec(x);
        ax.iter().zip(&self.translation).map(|(u, v)| u + v).collect()
    }

    pub fn apply_rational(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        let b = self.rational_translation()?;
        let ax = self.linear.to_rational().mul_vec(x);
        Ok(ax.into_iter().zip(b).map(|(u, v)| u + v).collect())
    }

    /// The `k`-th iterate `x ↦ A^k x + (A^{k-1} + … + I) b`.
    pub fn iterate(&self, k: u64) -> Self {
        let n = self.dim();
        let mut linear = IntMat::identity(n);
        let mut translation = vec![QuadExt::zero(); n];
        for _ in 0..k {
            translation = self.apply_real(&translation);
            linear = self.linear.mul(&linear);
        }
        let det = linear.det();
        Self { linear, translation, det }
    }

    /// The same linear part with zero translation.
    pub fn linear_part(&self) -> Self {
        Self {
            linear: self.linear.clone(),
            translation: vec![QuadExt::zero(); self.dim()],
            det: self.det.clone(),
        }
    }

    pub fn step(&self, x: &TorusPoint) -> Result<TorusPoint> {
        if x.dim() != self.dim() {
            return Err(Error::Shape(format!("point has dimension {}, map {}", x.dim(), self.dim())));
        }
        Ok(TorusPoint::new(self.apply_rational(x.coords())?))
    }
}
