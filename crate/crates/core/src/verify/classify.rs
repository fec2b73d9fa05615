//! Coset membership for rational symbols and finite Blaschke products.
//!
//! On the circle `z̄ = 1/z`, so `η̄ = 1/η`, `θ̆(z) = θ(1/z)` and
//! `θ* = 1/θ̆`. Every class below reduces to asking whether a rational
//! function has a pole in the closed disk after cancellation.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fourier::RationalSymbol;
use crate::inner::InnerFunction;
use crate::operators::OperatorKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SymbolClass {
    /// `φ ∈ η̄θH∞`, i.e. `φη/θ ∈ H∞`.
    EtaBarThetaHinf,
    /// `φ ∈ η̄H∞`, i.e. `φη ∈ H∞`.
    EtaBarHinf,
    /// `φ ∈ θ̆η̄H∞`, i.e. `φηθ* ∈ H∞`.
    ThetaBreveEtaBarHinf,
    /// `φ ∈ conj(θH∞) ∩ θ̆H∞`: `conj(φθ) ∈ H∞` and `φθ* ∈ H∞`.
    ConjThetaHinfBreve,
    /// `φ` is a constant multiple of `θ̄`.
    ConstThetaBar,
    /// `φ ∈ η·conj(θH∞)`, i.e. `conj(φ)·η/θ ∈ H∞`.
    EtaConjThetaHinf,
    /// `φ ∈ η̆H∞`, i.e. `φη* ∈ H∞`.
    EtaBreveHinf,
    /// `φ ∈ H∞ + ℛ`. Every rational symbol without poles on the circle
    /// belongs, since its co-analytic part has all poles inside the disk.
    Kronecker,
}

/// The class whose membership is equivalent to the operator vanishing.
pub fn vanishing_class(kind: OperatorKind) -> Option<SymbolClass> {
    match kind {
        OperatorKind::Rto => Some(SymbolClass::EtaBarThetaHinf),
        OperatorKind::Rho | OperatorKind::Srho => Some(SymbolClass::EtaBarHinf),
        OperatorKind::Stto => Some(SymbolClass::ConstThetaBar),
        OperatorKind::Btto => Some(SymbolClass::ConjThetaHinfBreve),
        OperatorKind::Tau => Some(SymbolClass::EtaConjThetaHinf),
        OperatorKind::HSmall => Some(SymbolClass::EtaBreveHinf),
        _ => None,
    }
}

pub fn classify_symbol(phi: &RationalSymbol, eta: &InnerFunction, theta: &InnerFunction, class: SymbolClass) -> Result<bool> {
    let eta_r = eta.to_rational()?;
    let theta_r = theta.to_rational()?;
    let theta_inv = theta_r.bar();
    let theta_star = theta_r.star();
    match class {
        SymbolClass::EtaBarThetaHinf => phi.mul(&eta_r).mul(&theta_inv).is_bounded_analytic(),
        SymbolClass::EtaBarHinf => phi.mul(&eta_r).is_bounded_analytic(),
        SymbolClass::ThetaBreveEtaBarHinf => phi.mul(&eta_r).mul(&theta_star).is_bounded_analytic(),
        SymbolClass::ConjThetaHinfBreve => {
            let first = phi.mul(&theta_r).bar().is_bounded_analytic()?;
            let second = phi.mul(&theta_star).is_bounded_analytic()?;
            Ok(first && second)
        }
        SymbolClass::ConstThetaBar => {
            phi.is_bounded_analytic().or_else(|e| match e {
                crate::Error::PoleOnCircle(_) => Err(e),
                _ => Ok(false),
            })?;
            Ok(phi.mul(&theta_r).is_constant())
        }
        SymbolClass::EtaConjThetaHinf => phi.bar().mul(&eta_r).mul(&theta_inv).is_bounded_analytic(),
        SymbolClass::EtaBreveHinf => phi.mul(&eta_r.star()).is_bounded_analytic(),
        SymbolClass::Kronecker => {
            phi.is_bounded_analytic()?;
            Ok(true)
        }
    }
}

/// Expected vanishing of `kind`, or `None` when no criterion applies. A
/// constant `θ` gives `K_θ = {0}`, so every operator touching `K_θ` is zero.
pub fn expected_vanishing(kind: OperatorKind, phi: &RationalSymbol, eta: &InnerFunction, theta: &InnerFunction) -> Result<Option<bool>> {
    let Some(class) = vanishing_class(kind) else { return Ok(None) };
    if theta.is_constant() {
        return Ok(Some(true));
    }
    classify_symbol(phi, eta, theta, class).map(Some)
}
