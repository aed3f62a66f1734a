//! The standard witness that `ℙ¹` is not Δ-complete.
//!
//! In `ℙ¹ × 𝔸¹` with coordinates `y` and `z`, take
//!
//! ```text
//! f₁ = z·(δy)² + y⁴ − 1
//! f₂ = 2z·δ²y + δz·δy + 4y³
//! ```
//!
//! for a chosen derivation `δ = δᵢ`. The two facts checked here are the
//! identity `δf₁ = δy·f₂` and that the homogenization of `f₁` in `y` does not
//! vanish at `[1, 0]`, so the affine equations describe the whole closed set.
//! The fibre over `z = 0` is empty, which this module also certifies:
//! `(y/4)·f₂ − f₁ = 1` once `z = 0`.
//!
//! The model-theoretic half of the argument (a Δ-transcendental `b`, quantifier
//! elimination) has no computational content and is only listed in the report.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{rational, AlgebraError, DiffPolynomial, RingContext};
use crate::homogenize::{self, HomogenizationError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KolchinError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Homogenization(#[from] HomogenizationError),
    #[error("derivative identity failed: δf₁ = {derivative}, δy·f₂ = {product}")]
    DerivativeIdentity { derivative: String, product: String },
    #[error("homogenized f₁ vanishes at the point at infinity")]
    InfinityOnZeroSet,
    #[error("the fibre over z = 0 is not certified empty")]
    ZeroFibre,
}

/// Verified symbolic skeleton of the non-completeness argument.
#[derive(Debug, Clone, PartialEq)]
pub struct KolchinWitness {
    /// 1-based derivation index used for `δ`.
    pub derivation: usize,
    pub f1: DiffPolynomial,
    pub f2: DiffPolynomial,
    /// `δf₁`, equal to `δy·f₂`.
    pub derivative: DiffPolynomial,
    pub homogenized: DiffPolynomial,
    pub degree: u32,
    /// Homogenized `f₁` at `(y, y₁) = (1, 0)`, a polynomial in `z`.
    pub infinity_value: DiffPolynomial,
}

/// Steps of the argument that are mathematical rather than computational.
pub const NON_COMPUTATIONAL_STEPS: [&str; 3] = [
    "pick b differentially transcendental over the base field; b(dy)^2 + y^4 - 1 = 0 has a solution a with 4a^3 - 1 != 0 in a saturated model",
    "by quantifier elimination, a closed projection containing the generic point b is all of A^1",
    "0 lies outside the projection (empty fibre, certified above), so the projection is not closed",
];

/// `f₁` and `f₂` in the ring `{y, z}` with `m` derivations, using `δᵢ`.
pub fn kolchin_equations(
    m: usize,
    i: usize,
) -> Result<(DiffPolynomial, DiffPolynomial), KolchinError> {
    let ring = RingContext::new(m, ["y", "z"])?;
    ring.check_derivation(i)?;
    let y = DiffPolynomial::variable(&ring, "y")?;
    let z = DiffPolynomial::variable(&ring, "z")?;
    let dy = y.apply_derivation(i)?;
    let d2y = dy.apply_derivation(i)?;
    let dz = z.apply_derivation(i)?;
    let one = DiffPolynomial::one(&ring);
    let f1 = &z * &dy.pow(2) + y.pow(4) - one;
    let f2 = &z * &d2y * 2 + &dz * &dy + y.pow(3) * 4;
    Ok((f1, f2))
}

/// Builds `f₁`, `f₂` for `δᵢ` in a ring with `m` derivations and verifies
/// every computable fact about them.
pub fn build_kolchin_witness(m: usize, i: usize) -> Result<KolchinWitness, KolchinError> {
    let (f1, f2) = kolchin_equations(m, i)?;
    verify_kolchin_witness(f1, f2, i)
}

/// Checks the derivative identity, the infinity exclusion and the empty
/// fibre for a caller-supplied pair.
pub fn verify_kolchin_witness(
    f1: DiffPolynomial,
    f2: DiffPolynomial,
    i: usize,
) -> Result<KolchinWitness, KolchinError> {
    let ring: Arc<RingContext> = f1.ring().clone();
    let y = DiffPolynomial::variable(&ring, "y")?;
    let dy = y.apply_derivation(i)?;
    let derivative = f1.apply_derivation(i)?;
    let product = dy.try_mul(&f2)?;
    if derivative != product {
        return Err(KolchinError::DerivativeIdentity {
            derivative: derivative.to_string(),
            product: product.to_string(),
        });
    }

    let y1 = ring.fresh_name("y1");
    let h = homogenize::homogenize(&f1, &["y"], &y1)?;
    let check = homogenize::excludes_infinity(&h.polynomial, "y", &y1, &BTreeMap::new())?;
    if !check.excluded {
        return Err(KolchinError::InfinityOnZeroSet);
    }

    if !zero_fibre_is_empty(&f1, &f2)? {
        return Err(KolchinError::ZeroFibre);
    }

    Ok(KolchinWitness {
        derivation: i,
        f1,
        f2,
        derivative,
        homogenized: h.polynomial,
        degree: h.degree,
        infinity_value: check.value,
    })
}

/// `(y/4)·f₂ − f₁ = 1` after setting `z = 0`.
fn zero_fibre_is_empty(f1: &DiffPolynomial, f2: &DiffPolynomial) -> Result<bool, KolchinError> {
    let ring = f1.ring();
    let target = ring.without_variable("z")?;
    let at_zero = BTreeMap::from([("z".to_string(), DiffPolynomial::zero(&target))]);
    let g1 = f1.substitute(&target, &at_zero)?;
    let g2 = f2.substitute(&target, &at_zero)?;
    let y = DiffPolynomial::variable(&target, "y")?;
    let combo = (&y * &g2).scale(&rational(1, 4)) - g1;
    Ok(combo == DiffPolynomial::one(&target))
}

impl KolchinWitness {
    /// Human-readable report, one fact per line.
    pub fn report(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("derivation: d{}\n", self.derivation));
        out.push_str(&format!("f1 = {}\n", self.f1));
        out.push_str(&format!("f2 = {}\n", self.f2));
        out.push_str(&format!("d{}(f1) = d{}(y)*f2: verified\n", self.derivation, self.derivation));
        out.push_str(&format!(
            "homogenized f1 (degree {}) = {}\n",
            self.degree, self.homogenized
        ));
        out.push_str(&format!(
            "value at [1, 0] = {} (point at infinity excluded)\n",
            self.infinity_value
        ));
        out.push_str("fibre over z = 0: empty, y/4*f2 - f1 = 1\n");
        for step in NON_COMPUTATIONAL_STEPS {
            out.push_str(&format!("not computed: {step}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    #[test]
    fn ordinary_case() {
        let w = build_kolchin_witness(1, 1).unwrap();
        assert_eq!(w.f1.to_string(), "z*d1(y)^2 + y^4 - 1");
        assert_eq!(w.degree, 4);
        assert_eq!(w.infinity_value, DiffPolynomial::one(w.infinity_value.ring()));
        assert_eq!(
            w.homogenized,
            parse("z*(d1(y)*y1 - y*d1(y1))^2 + y^4 - y1^4", w.homogenized.ring()).unwrap()
        );
    }

    #[test]
    fn any_derivation_of_a_partial_ring() {
        let w = build_kolchin_witness(3, 2).unwrap();
        assert_eq!(w.f2.to_string(), "d2(z)*d2(y) + 2*z*d2^2(y) + 4*y^3");
        assert_eq!(w.derivation, 2);
        assert!(build_kolchin_witness(3, 4).is_err());
        assert!(build_kolchin_witness(2, 0).is_err());
    }

    #[test]
    fn tampered_second_equation_fails() {
        let (f1, _) = kolchin_equations(1, 1).unwrap();
        let bad = parse("2*z*d1^2(y) + d1(z)*d1(y) + 3*y^3", f1.ring()).unwrap();
        assert!(matches!(
            verify_kolchin_witness(f1, bad, 1),
            Err(KolchinError::DerivativeIdentity { .. })
        ));
    }

    #[test]
    fn report_lists_every_fact() {
        let text = build_kolchin_witness(1, 1).unwrap().report();
        assert!(text.contains("f1 = z*d1(y)^2 + y^4 - 1"));
        assert!(text.contains("value at [1, 0] = 1"));
        assert_eq!(text.matches("not computed:").count(), 3);
    }
}
