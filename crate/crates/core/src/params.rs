//! Physical parameters of the two-mode model and the quantities derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of the two-mode Hamiltonian (ħ = 1).
///
/// All fields except `n_atoms` are angular frequencies in one consistent unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Trap energy of mode `a`.
    pub omega_a: f64,
    /// Trap energy of mode `b`.
    pub omega_b: f64,
    /// Collision strength within mode `a`.
    pub gamma_a: f64,
    /// Collision strength within mode `b`.
    pub gamma_b: f64,
    /// Collision strength between the modes.
    pub gamma_ab: f64,
    /// Two-photon coupling strength.
    pub g: f64,
    /// Two-photon detuning Δ.
    pub delta: f64,
    /// Total number of bosons N.
    pub n_atoms: usize,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("gamma_a", self.gamma_a),
            ("gamma_b", self.gamma_b),
            ("gamma_ab", self.gamma_ab),
            ("g", self.g),
            ("delta", self.delta),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::param(name, format!("must be finite, got {value}")));
            }
        }
        if self.g < 0.0 {
            return Err(Error::param("g", format!("must be non-negative, got {}", self.g)));
        }
        if self.n_atoms < 1 {
            return Err(Error::param("n_atoms", "must be at least 1"));
        }
        Ok(())
    }

    /// Nonlinear parameter Λ = (γ_a + γ_b − 2γ_ab)/4.
    pub fn lambda_nl(&self) -> f64 {
        (self.gamma_a + self.gamma_b - 2.0 * self.gamma_ab) / 4.0
    }

    /// Frequency-scattering detuning Γ = ω_ab + (γ_a − γ_b)(N − 1).
    pub fn gamma_fs(&self) -> f64 {
        (self.omega_a - self.omega_b) + (self.gamma_a - self.gamma_b) * (self.n_atoms as f64 - 1.0)
    }

    /// Multiplies every frequency-valued field by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            omega_a: self.omega_a * s,
            omega_b: self.omega_b * s,
            gamma_a: self.gamma_a * s,
            gamma_b: self.gamma_b * s,
            gamma_ab: self.gamma_ab * s,
            g: self.g * s,
            delta: self.delta * s,
            n_atoms: self.n_atoms,
        }
    }
}

/// Auxiliary quantities of the rotation-product propagator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// Λ, coefficient of J_z² in the rotating-frame Hamiltonian.
    pub lambda_nl: f64,
    /// Γ, frequency-scattering detuning.
    pub gamma_fs: f64,
    /// ω_ab = ω_a − ω_b.
    pub omega_ab: f64,
    /// ω₀ = (ω̃_a + ω̃_b)/2 with ω̃ = ω − γ.
    pub omega0: f64,
    /// ω₁ = (ω̃_a − ω̃_b − Δ)/2.
    pub omega1: f64,
    /// ω₂ = (γ_a − γ_b)/2.
    pub omega2: f64,
    /// Mixing angle ξ = atan2(2g, Γ − Δ), in (0, π) whenever g > 0.
    pub xi: f64,
    /// Precession rate ϖ = (Γ − Δ) cos ξ + 2g sin ξ.
    pub varpi: f64,
    /// Global phase rate η = ½[(ω_a + ω_b) + (γ_a + γ_b)(N − 1)]N.
    pub eta: f64,
    /// Detuning Δ the quantities above were computed with.
    pub delta: f64,
    pub g: f64,
    pub n_atoms: usize,
}

pub fn derive_params(p: &PhysicalParams) -> Result<DerivedParams> {
    p.validate()?;
    let n = p.n_atoms as f64;
    let gamma_fs = p.gamma_fs();
    let detuned = gamma_fs - p.delta;
    let xi = (2.0 * p.g).atan2(detuned);
    let varpi = detuned * xi.cos() + 2.0 * p.g * xi.sin();
    let wa = p.omega_a - p.gamma_a;
    let wb = p.omega_b - p.gamma_b;
    Ok(DerivedParams {
        lambda_nl: p.lambda_nl(),
        gamma_fs,
        omega_ab: p.omega_a - p.omega_b,
        omega0: (wa + wb) / 2.0,
        omega1: (wa - wb - p.delta) / 2.0,
        omega2: (p.gamma_a - p.gamma_b) / 2.0,
        xi,
        varpi,
        eta: 0.5 * ((p.omega_a + p.omega_b) + (p.gamma_a + p.gamma_b) * (n - 1.0)) * n,
        delta: p.delta,
        g: p.g,
        n_atoms: p.n_atoms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn base() -> PhysicalParams {
        PhysicalParams {
            omega_a: 3.0,
            omega_b: 1.0,
            gamma_a: 0.2,
            gamma_b: 0.1,
            gamma_ab: 0.05,
            g: 1.0,
            delta: 0.5,
            n_atoms: 10,
        }
    }

    #[test]
    fn symmetric_collisions_give_zero_lambda() {
        let p = PhysicalParams { gamma_a: 0.3, gamma_b: 0.3, gamma_ab: 0.3, ..base() };
        let d = derive_params(&p).unwrap();
        assert_eq!(d.lambda_nl, 0.0);
        assert_eq!(d.gamma_fs, p.omega_a - p.omega_b);
    }

    #[test]
    fn lambda_and_gamma_definitions() {
        let p = base();
        let d = derive_params(&p).unwrap();
        assert_eq!(d.lambda_nl, (0.2 + 0.1 - 2.0 * 0.05) / 4.0);
        assert_eq!(d.gamma_fs, 2.0 + 0.1 * 9.0);
        // tan ξ (Γ − Δ) = 2g
        assert!((d.xi.tan() * (d.gamma_fs - p.delta) - 2.0 * p.g).abs() < 1e-12);
    }

    #[test]
    fn resonant_gamma_gives_quarter_turn() {
        // Γ = Δ
        let p = PhysicalParams { omega_a: 4.0, omega_b: 0.0, gamma_a: 0.0, gamma_b: 0.0, gamma_ab: 0.0, g: 1.0, delta: 4.0, n_atoms: 3 };
        let d = derive_params(&p).unwrap();
        assert!((d.xi - FRAC_PI_2).abs() < 1e-15);
        assert!((d.varpi - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hadamard_setting() {
        // Γ − Δ = −2g
        let g = 0.7;
        let p = PhysicalParams { omega_a: 1.0, omega_b: 1.0 + 2.0 * g, gamma_a: 0.0, gamma_b: 0.0, gamma_ab: 0.0, g, delta: 0.0, n_atoms: 5 };
        let d = derive_params(&p).unwrap();
        assert!((d.xi - 3.0 * PI / 4.0).abs() < 1e-14);
        assert!((d.varpi - 2.0 * 2f64.sqrt() * g).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        let e = derive_params(&PhysicalParams { delta: f64::NAN, ..base() }).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "delta", .. }));
        let e = derive_params(&PhysicalParams { g: -1.0, ..base() }).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "g", .. }));
        let e = derive_params(&PhysicalParams { n_atoms: 0, ..base() }).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "n_atoms", .. }));
        let e = derive_params(&PhysicalParams { omega_b: f64::INFINITY, ..base() }).unwrap_err();
        assert!(matches!(e, Error::InvalidParameter { field: "omega_b", .. }));
    }

    #[test]
    fn json_keys_are_exact() {
        let json = r#"{"omega_a":1,"omega_b":0,"gamma_a":0,"gamma_b":0,"gamma_ab":0,"g":1,"delta":4,"n_atoms":7}"#;
        let p: PhysicalParams = serde_json::from_str(json).unwrap();
        assert_eq!(p.n_atoms, 7);
        let extra = r#"{"omega_a":1,"omega_b":0,"gamma_a":0,"gamma_b":0,"gamma_ab":0,"g":1,"delta":4,"n_atoms":7,"h":2}"#;
        assert!(serde_json::from_str::<PhysicalParams>(extra).is_err());
        let missing = r#"{"omega_a":1,"omega_b":0,"gamma_a":0,"gamma_b":0,"gamma_ab":0,"delta":4,"n_atoms":7}"#;
        let err = serde_json::from_str::<PhysicalParams>(missing).unwrap_err();
        assert!(err.to_string().contains("`g`"));
    }

    fn arb_params() -> impl Strategy<Value = PhysicalParams> {
        (
            -10.0..10.0f64,
            -10.0..10.0f64,
            -1.0..1.0f64,
            -1.0..1.0f64,
            -1.0..1.0f64,
            1e-3..5.0f64,
            -10.0..10.0f64,
            1usize..200,
        )
            .prop_map(|(omega_a, omega_b, gamma_a, gamma_b, gamma_ab, g, delta, n_atoms)| PhysicalParams {
                omega_a,
                omega_b,
                gamma_a,
                gamma_b,
                gamma_ab,
                g,
                delta,
                n_atoms,
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn branch_has_positive_sine(p in arb_params()) {
            let d = derive_params(&p).unwrap();
            prop_assert!(d.xi.sin() > 0.0);
            prop_assert!(d.xi > 0.0 && d.xi < PI);
        }

        #[test]
        fn varpi_is_the_hypotenuse(p in arb_params()) {
            let d = derive_params(&p).unwrap();
            let detuned = d.gamma_fs - p.delta;
            let hyp = detuned.hypot(2.0 * p.g);
            prop_assert!((d.varpi - hyp).abs() <= 1e-12 * hyp.max(1.0));
            let residual = detuned * d.xi.sin() - 2.0 * p.g * d.xi.cos();
            let sq = detuned.powi(2) + 4.0 * p.g.powi(2) - residual.powi(2);
            prop_assert!((d.varpi.powi(2) - sq).abs() <= 1e-10 * sq.max(1.0));
        }

        #[test]
        fn frequency_scaling(p in arb_params(), s in 0.01..100.0f64) {
            let d = derive_params(&p).unwrap();
            let ds = derive_params(&p.scaled(s)).unwrap();
            // absolute floor covers cancellation in Λ and Γ
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-10 * (a.abs() + b.abs()) + 1e-12 * s;
            prop_assert!(close(ds.lambda_nl, s * d.lambda_nl));
            prop_assert!(close(ds.gamma_fs, s * d.gamma_fs));
            prop_assert!(close(ds.varpi, s * d.varpi));
            prop_assert!(close(ds.eta, s * d.eta));
            prop_assert!((ds.xi - d.xi).abs() < 1e-12);
        }
    }
}
