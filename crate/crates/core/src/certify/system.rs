use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::CertifyError;
use crate::algebra::{DerivativeVariable, DiffPolynomial, Rational, RingContext};
use crate::lang::{self, Expr};

/// A system `δᵢy = Pᵢ(y)`, `i = 1..m`, with each `Pᵢ` an ordinary polynomial
/// in `y` over the rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderSystem {
    ring: Arc<RingContext>,
    rhs: Vec<DiffPolynomial>,
}

impl FirstOrderSystem {
    /// `rhs[i-1]` is `Pᵢ`. The number of derivations is `rhs.len()`; each
    /// `Pᵢ` may come from any ring in which it uses only `variable`.
    pub fn new(variable: &str, rhs: Vec<DiffPolynomial>) -> Result<Self, CertifyError> {
        let ring = RingContext::new(rhs.len(), [variable])?;
        let y = DiffPolynomial::variable(&ring, variable)?;
        let rhs = rhs
            .into_iter()
            .enumerate()
            .map(|(k, p)| {
                let invalid = |message: String| CertifyError::InvalidSystem { pos: 0, message };
                if p.order() > 0 {
                    return Err(invalid(format!("P{} contains derivatives", k + 1)));
                }
                if p.variables_used().iter().any(|v| v != variable) {
                    return Err(invalid(format!(
                        "P{} must be a polynomial in `{variable}` only",
                        k + 1
                    )));
                }
                Ok(p.terms().fold(DiffPolynomial::zero(&ring), |acc, (m, c)| {
                    acc + y.pow(m.total_degree()).scale(c)
                }))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { ring, rhs })
    }

    /// Parses `d1(y) = P1; d2(y) = P2; ...`. Equations may come in any order
    /// but must cover `d1..dm` exactly once.
    pub fn parse(text: &str) -> Result<Self, CertifyError> {
        let mut offset = 0;
        let mut equations: Vec<(usize, usize, String, Expr)> = Vec::new();
        for piece in text.split(';') {
            let start = offset;
            offset += piece.len() + 1;
            if piece.trim().is_empty() {
                continue;
            }
            let first_token = start + piece.len() - piece.trim_start().len();
            let (lhs, rhs) =
                lang::parse_equation(piece).map_err(|e| CertifyError::Parse(e.offset_by(start)))?;
            let (index, var) = match &lhs {
                Expr::Derive {
                    index, power: 1, arg, ..
                } => match arg.as_ref() {
                    Expr::Var(name, _) => (*index, name.clone()),
                    _ => return Err(not_first_order(first_token, piece)),
                },
                _ => return Err(not_first_order(first_token, piece)),
            };
            equations.push((first_token, index, var, rhs));
        }
        if equations.is_empty() {
            return Err(CertifyError::InvalidSystem {
                pos: 0,
                message: "empty system".into(),
            });
        }
        let m = equations.len();
        let variable = equations[0].2.clone();
        let ring = RingContext::new(m, [variable.as_str()])?;
        let mut slots: Vec<Option<DiffPolynomial>> = vec![None; m];
        for (start, index, var, rhs) in equations {
            if var != variable {
                return Err(CertifyError::InvalidSystem {
                    pos: start,
                    message: format!("all equations must be in `{variable}`, found `{var}`"),
                });
            }
            if index == 0 || index > m {
                return Err(CertifyError::InvalidSystem {
                    pos: start,
                    message: format!("derivation d{index} outside d1..d{m}"),
                });
            }
            if slots[index - 1].is_some() {
                return Err(CertifyError::InvalidSystem {
                    pos: start,
                    message: format!("d{index} is given twice"),
                });
            }
            let p = lang::lower(&rhs, &ring).map_err(|e| CertifyError::Parse(e.offset_by(start)))?;
            if p.order() > 0 {
                return Err(CertifyError::InvalidSystem {
                    pos: start,
                    message: format!("right-hand side of d{index} contains derivatives"),
                });
            }
            slots[index - 1] = Some(p);
        }
        let rhs = slots.into_iter().map(|p| p.expect("all slots filled")).collect();
        Ok(Self { ring, rhs })
    }

    pub fn derivations(&self) -> usize {
        self.rhs.len()
    }

    pub fn variable(&self) -> &str {
        self.ring.name(0)
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    /// `Pᵢ`, 1-based.
    pub fn rhs(&self, i: usize) -> &DiffPolynomial {
        &self.rhs[i - 1]
    }

    /// `deg Pᵢ` (0 for the zero polynomial).
    pub fn degree(&self, i: usize) -> u32 {
        self.rhs(i).total_degree()
    }

    /// Coefficient of `y^{deg Pᵢ}`, zero when `Pᵢ = 0`.
    pub fn leading_coefficient(&self, i: usize) -> Rational {
        let p = self.rhs(i);
        p.terms()
            .filter(|(m, _)| m.total_degree() == p.total_degree())
            .map(|(_, c)| c.clone())
            .next()
            .unwrap_or_else(Rational::zero)
    }

    /// `Pᵢ` as `(exponent, coefficient)` pairs.
    pub fn rhs_powers(&self, i: usize) -> Vec<(u32, Rational)> {
        self.rhs(i)
            .terms()
            .map(|(m, c)| (m.total_degree(), c.clone()))
            .collect()
    }

    /// `δᵢy − Pᵢ(y)`.
    pub fn equation(&self, i: usize) -> DiffPolynomial {
        let y = DiffPolynomial::variable(&self.ring, self.variable()).expect("own variable");
        &y.apply_derivation(i).expect("index in range") - self.rhs(i)
    }

    pub fn is_linear(&self, i: usize) -> bool {
        self.degree(i) <= 1
    }

    /// Smallest index with `deg Pᵢ ≥ 2`.
    pub fn reducing_derivation(&self) -> Option<usize> {
        (1..=self.derivations()).find(|&i| !self.is_linear(i))
    }

    /// Indices with `deg Pᵢ ≥ 2`.
    pub fn nonlinear_indices(&self) -> BTreeSet<usize> {
        (1..=self.derivations()).filter(|&i| !self.is_linear(i)).collect()
    }

    pub fn plain_variable(&self) -> DerivativeVariable {
        DerivativeVariable::plain(0, self.derivations())
    }

    /// One `d<i>(y) = P` string per equation.
    pub fn equation_strings(&self) -> Vec<String> {
        (1..=self.derivations())
            .map(|i| format!("d{i}({}) = {}", self.variable(), self.rhs(i)))
            .collect()
    }
}

impl fmt::Display for FirstOrderSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.equation_strings().join("; "))
    }
}

fn not_first_order(pos: usize, piece: &str) -> CertifyError {
    CertifyError::InvalidSystem {
        pos,
        message: format!("`{}` is not of the form d<i>(y) = P(y)", piece.trim()),
    }
}

/// Commutation check for one ordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    /// `Pⱼ′·Pᵢ − Pᵢ′·Pⱼ`.
    pub residual: DiffPolynomial,
    pub compatible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrabilityReport {
    pub pairs: Vec<PairCheck>,
    pub compatible: bool,
}

/// `δᵢδⱼy = δⱼδᵢy` forces `Pⱼ′(y)·Pᵢ(y) = Pᵢ′(y)·Pⱼ(y)`.
pub fn integrability_residual(sys: &FirstOrderSystem, i: usize, j: usize) -> PairCheck {
    let y = sys.plain_variable();
    let (pi, pj) = (sys.rhs(i), sys.rhs(j));
    let residual = &pj.formal_partial(&y) * pi - &pi.formal_partial(&y) * pj;
    PairCheck {
        i,
        j,
        compatible: residual.is_zero(),
        residual,
    }
}

/// Checks every pair `i < j`.
pub fn check_integrability(sys: &FirstOrderSystem) -> IntegrabilityReport {
    let m = sys.derivations();
    let pairs: Vec<PairCheck> = (1..=m)
        .flat_map(|i| ((i + 1)..=m).map(move |j| (i, j)))
        .map(|(i, j)| integrability_residual(sys, i, j))
        .collect();
    IntegrabilityReport {
        compatible: pairs.iter().all(|p| p.compatible),
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::integer;

    #[test]
    fn parse_and_print() {
        let sys = FirstOrderSystem::parse("d2(y) = 2*y^2 ; d1(y)=y^2").unwrap();
        assert_eq!(sys.derivations(), 2);
        assert_eq!(sys.to_string(), "d1(y) = y^2; d2(y) = 2*y^2");
        assert_eq!(sys.degree(2), 2);
        assert_eq!(sys.leading_coefficient(2), integer(2));
        assert_eq!(sys.equation(1).to_string(), "d1(y) - y^2");
        assert_eq!(sys.reducing_derivation(), Some(1));
    }

    #[test]
    fn malformed_systems() {
        let pos = |t: &str| match FirstOrderSystem::parse(t).unwrap_err() {
            CertifyError::InvalidSystem { pos, .. } => pos,
            CertifyError::Parse(e) => e.position(),
            other => panic!("{other:?}"),
        };
        assert_eq!(pos("d1(y) = y^2; d1(y) = y"), 13);
        assert_eq!(pos("d1(y) = y^2; d3(y) = y"), 13);
        assert_eq!(pos("d1(y) = y^2; d2(z) = z"), 13);
        assert_eq!(pos("d1(y) = d1(y)"), 0);
        assert_eq!(pos("y = y^2"), 0);
        assert_eq!(pos("d1(y) = y^2; d2(y) = y +"), 24);
        assert_eq!(pos("d1(y) = w"), 8);
        assert!(FirstOrderSystem::parse(" ; ").is_err());
    }

    #[test]
    fn integrability_examples() {
        let ok = FirstOrderSystem::parse("d1(y) = y^2; d2(y) = 2*y^2").unwrap();
        let report = check_integrability(&ok);
        assert!(report.compatible);
        assert_eq!(report.pairs.len(), 1);

        let bad = FirstOrderSystem::parse("d1(y) = y^2; d2(y) = y^3").unwrap();
        let report = check_integrability(&bad);
        assert!(!report.compatible);
        // P2'P1 - P1'P2 = 3y^4 - 2y^4
        assert_eq!(report.pairs[0].residual.to_string(), "y^4");

        let single = FirstOrderSystem::parse("d1(y) = y^5 - 3").unwrap();
        assert!(check_integrability(&single).compatible);
        assert!(check_integrability(&single).pairs.is_empty());
    }

    #[test]
    fn built_from_polynomials() {
        let r = RingContext::new(1, ["y", "z"]).unwrap();
        let p = lang::parse("3*y^2 - 1", &r).unwrap();
        let sys = FirstOrderSystem::new("y", vec![p.clone(), p.scale(&integer(2))]).unwrap();
        assert_eq!(sys.to_string(), "d1(y) = 3*y^2 - 1; d2(y) = 6*y^2 - 2");
        let bad = lang::parse("y*z", &r).unwrap();
        assert!(FirstOrderSystem::new("y", vec![bad]).is_err());
        let bad = lang::parse("d1(y)", &r).unwrap();
        assert!(FirstOrderSystem::new("y", vec![bad]).is_err());
    }

    #[test]
    fn integrability_is_symmetric() {
        let sys = FirstOrderSystem::parse("d1(y) = y^2 + 1; d2(y) = y^3; d3(y) = 3*y^2 + 3").unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                let a = integrability_residual(&sys, i, j);
                let b = integrability_residual(&sys, j, i);
                assert_eq!(a.compatible, b.compatible);
                assert_eq!(a.residual, -&b.residual);
            }
        }
        assert!(integrability_residual(&sys, 1, 3).compatible);
    }
}
