//! Time evolution engines.
//!
//! Four routes are provided and share no evolution code:
//!
//! - [`qubit_propagator`]: closed-form 2×2 matrix of the rotation product
//!   `e^{−iηt} R_z(Δt) R_y(−ξ) R_z(ϖt) R_y(ξ)` acting on the spinor (α, β).
//! - [`full_propagator_analytic`]: `U(t) V e^{−iH^V t} V†` on the full Fock
//!   space. Exact only when Λ = 0, where `H^V` is diagonal.
//! - [`evolve_oracle`] / [`OracleEvolver`]: `U(t) e^{−iH^U t}` with the
//!   rotating-frame Hamiltonian `H^U` exponentiated by eigendecomposition.
//!   Exact for every Λ.
//! - [`evolve_rk4`]: classic Runge-Kutta integration of the explicitly
//!   time-dependent lab-frame Hamiltonian.
//!
//! `U(t) = exp(−iΔt(n_a − n_b)/2)` undoes the rotating frame, so every engine
//! returns lab-frame states.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fock::{ladder_coefficients, StateVector};
use crate::params::{derive_params, DerivedParams, PhysicalParams};
use crate::C64;

/// Largest `dt * spectral radius` accepted by [`evolve_rk4`].
pub const RK4_STABILITY_LIMIT: f64 = 0.1;

/// 2×2 propagator on the qubit spinor, rows/columns ordered (|0⟩, |1⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPropagator {
    pub matrix: Matrix2<C64>,
    pub t: f64,
    pub delta: f64,
    pub xi: f64,
    pub varpi: f64,
    pub eta: f64,
}

impl QubitPropagator {
    /// Applies the propagator to the spinor (α, β).
    pub fn apply(&self, alpha: C64, beta: C64) -> (C64, C64) {
        let m = &self.matrix;
        (m[(0, 0)] * alpha + m[(0, 1)] * beta, m[(1, 0)] * alpha + m[(1, 1)] * beta)
    }

    /// max |(U†U − 1)_{ij}|
    pub fn unitarity_error(&self) -> f64 {
        (self.matrix.adjoint() * self.matrix - Matrix2::identity()).camax()
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!("time must be finite and non-negative, got {t}")));
    }
    Ok(())
}

/// Closed-form matrix elements P₁₁ … P₂₂ times the global phase `e^{−iηt}`.
pub fn qubit_propagator(dp: &DerivedParams, t: f64) -> Result<QubitPropagator> {
    check_time(t)?;
    let (s, c) = (dp.xi / 2.0).sin_cos();
    let i = C64::i();
    let half_delta = C64::from_polar(1.0, -dp.delta * t / 2.0);
    let half_varpi = C64::from_polar(1.0, -dp.varpi * t / 2.0);
    let full_varpi = C64::from_polar(1.0, dp.varpi * t);
    let transfer = i * (2.0 * c * s * (dp.varpi * t / 2.0).sin());

    let p11 = half_delta * half_varpi * (c * c + full_varpi * (s * s));
    let p12 = transfer * half_delta;
    let p21 = transfer * half_delta.conj();
    let p22 = half_delta.conj() * half_varpi * (s * s + full_varpi * (c * c));

    let global = C64::from_polar(1.0, -dp.eta * t);
    Ok(QubitPropagator {
        matrix: Matrix2::new(p11, p12, p21, p22) * global,
        t,
        delta: dp.delta,
        xi: dp.xi,
        varpi: dp.varpi,
        eta: dp.eta,
    })
}

/// `R_z(θ) = diag(e^{−iθ/2}, e^{iθ/2})`.
pub fn rz(theta: f64) -> Matrix2<C64> {
    let zero = C64::new(0.0, 0.0);
    Matrix2::new(C64::from_polar(1.0, -theta / 2.0), zero, zero, C64::from_polar(1.0, theta / 2.0))
}

/// `R_y(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
pub fn ry(theta: f64) -> Matrix2<C64> {
    let (s, c) = (theta / 2.0).sin_cos();
    Matrix2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0))
}

/// The same propagator assembled as a literal product of rotation matrices.
pub fn rotation_product(dp: &DerivedParams, t: f64) -> Result<Matrix2<C64>> {
    check_time(t)?;
    let global = C64::from_polar(1.0, -dp.eta * t);
    Ok(rz(dp.delta * t) * ry(-dp.xi) * rz(dp.varpi * t) * ry(dp.xi) * global)
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.diag.len();
        let mut m = DMatrix::from_diagonal(&DVector::from_column_slice(&self.diag));
        for (k, &o) in self.off.iter().enumerate() {
            m[(k, k + 1)] = o;
            m[(k + 1, k)] = o;
        }
        debug_assert_eq!(m.nrows(), n);
        m
    }
}

/// Diagonal of the lab-frame Hamiltonian: trap and collision energies.
fn lab_diagonal(p: &PhysicalParams) -> Vec<f64> {
    let n = p.n_atoms;
    let (wa, wb) = (p.omega_a - p.gamma_a, p.omega_b - p.gamma_b);
    (0..=n)
        .map(|k| {
            let na = (n - k) as f64;
            let nb = k as f64;
            wa * na + wb * nb + p.gamma_a * na * na + p.gamma_b * nb * nb + 2.0 * p.gamma_ab * na * nb
        })
        .collect()
}

/// Rotating-frame Hamiltonian
/// `H^U = ω̃_a n_a + ω̃_b n_b + γ_a n_a² + γ_b n_b² + 2γ_ab n_a n_b − g(a†b + ab†) − (Δ/2)(n_a − n_b)`.
pub fn rotating_frame_hamiltonian(p: &PhysicalParams) -> Result<Tridiagonal> {
    p.validate()?;
    let n = p.n_atoms;
    let diag = lab_diagonal(p)
        .into_iter()
        .enumerate()
        .map(|(k, e)| e - p.delta / 2.0 * (n as f64 - 2.0 * k as f64))
        .collect();
    let off = ladder_coefficients(n).into_iter().map(|s| -p.g * s).collect();
    Ok(Tridiagonal { diag, off })
}

/// `exp(−iΔt J_z / 2)` as its diagonal.
fn frame_phases(n_atoms: usize, delta: f64, t: f64) -> impl Iterator<Item = C64> {
    (0..=n_atoms).map(move |k| C64::from_polar(1.0, -delta * t * (n_atoms as f64 - 2.0 * k as f64) / 2.0))
}

fn symmetric_eigen(m: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let dim = m.nrows();
    SymmetricEigen::try_new(m, f64::EPSILON, 1000 * dim.max(10)).ok_or(Error::NoConvergence(dim))
}

/// `e^{iθ J_x}` for the (N+1)-dimensional J_x, via its real eigendecomposition.
fn exp_i_jx(n_atoms: usize, theta: f64) -> Result<DMatrix<C64>> {
    let off = ladder_coefficients(n_atoms);
    let jx = Tridiagonal { diag: vec![0.0; n_atoms + 1], off }.to_dense();
    let eig = symmetric_eigen(jx)?;
    let w = eig.eigenvectors.map(|x| C64::new(x, 0.0));
    let phases = DVector::from_iterator(n_atoms + 1, eig.eigenvalues.iter().map(|&e| C64::from_polar(1.0, theta * e)));
    Ok(&w * DMatrix::from_diagonal(&phases) * w.transpose())
}

/// Tolerance on Λ for the analytic Fock propagator.
fn lambda_tolerance(p: &PhysicalParams) -> f64 {
    1e-12 * (p.gamma_a.abs() + p.gamma_b.abs() + 2.0 * p.gamma_ab.abs()).max(1.0)
}

/// Full-space analytic propagator `U(t) V e^{−iH^V t} V†`, with
/// `V = exp((ξ/2)(a†b − ab†))` and the diagonal
/// `H^V = ω₀N + γ_ab N² + [(ω₁ + ω₂N) cos ξ + g sin ξ] (n_a − n_b)`.
///
/// Valid only for Λ = 0; otherwise `H^V` misses the `Λ J_z²` twisting term.
pub fn full_propagator_analytic(p: &PhysicalParams, t: f64) -> Result<DMatrix<C64>> {
    check_time(t)?;
    let dp = derive_params(p)?;
    if dp.lambda_nl.abs() > lambda_tolerance(p) {
        return Err(Error::Domain(format!(
            "full_propagator_analytic requires Λ = 0 (γ_a + γ_b = 2γ_ab), got Λ = {}",
            dp.lambda_nl
        )));
    }
    let n = p.n_atoms;
    let nf = n as f64;

    // a†b − ab† = iJ_y and J_y = D J_x D† with D = diag(i^k).
    let d = DVector::from_iterator(n + 1, (0..=n).map(|k| C64::i().powu(k as u32)));
    let mut v = exp_i_jx(n, dp.xi / 2.0)?;
    for r in 0..=n {
        for c in 0..=n {
            v[(r, c)] *= d[r] * d[c].conj();
        }
    }

    let precession = (dp.omega1 + dp.omega2 * nf) * dp.xi.cos() + p.g * dp.xi.sin();
    let offset = dp.omega0 * nf + p.gamma_ab * nf * nf;
    let hv_phases = DVector::from_iterator(
        n + 1,
        (0..=n).map(|k| C64::from_polar(1.0, -(offset + precession * (nf - 2.0 * k as f64)) * t)),
    );
    let mut prop = &v * DMatrix::from_diagonal(&hv_phases) * v.adjoint();
    for (r, u) in frame_phases(n, p.delta, t).enumerate() {
        for c in 0..=n {
            prop[(r, c)] *= u;
        }
    }
    Ok(prop)
}

/// Reusable eigendecomposition of `H^U` for repeated evolutions of one
/// parameter set.
#[derive(Debug, Clone)]
pub struct OracleEvolver {
    params: PhysicalParams,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl OracleEvolver {
    pub fn new(p: &PhysicalParams) -> Result<Self> {
        let h = rotating_frame_hamiltonian(p)?.to_dense();
        let eig = symmetric_eigen(h)?;
        Ok(Self { params: *p, energies: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    /// Eigenvalues of `H^U`.
    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn evolve(&self, s0: &StateVector, t: f64) -> Result<StateVector> {
        check_time(t)?;
        let n = self.params.n_atoms;
        if s0.n_atoms() != n {
            return Err(Error::InvalidArgument(format!(
                "state has N = {} but parameters have N = {n}",
                s0.n_atoms()
            )));
        }
        let psi = s0.amplitudes();
        let re = psi.map(|c| c.re);
        let im = psi.map(|c| c.im);
        let c_re = self.vectors.tr_mul(&re);
        let c_im = self.vectors.tr_mul(&im);
        let mut rot_re = DVector::zeros(n + 1);
        let mut rot_im = DVector::zeros(n + 1);
        for j in 0..=n {
            let ph = C64::from_polar(1.0, -self.energies[j] * t) * C64::new(c_re[j], c_im[j]);
            rot_re[j] = ph.re;
            rot_im[j] = ph.im;
        }
        let out_re = &self.vectors * rot_re;
        let out_im = &self.vectors * rot_im;
        let amps = DVector::from_iterator(
            n + 1,
            frame_phases(n, self.params.delta, t)
                .zip(out_re.iter().zip(out_im.iter()))
                .map(|(u, (&r, &i))| u * C64::new(r, i)),
        );
        Ok(StateVector::unchecked(amps))
    }
}

/// Exact evolution `U(t) e^{−iH^U t} s0` for any Λ.
pub fn evolve_oracle(p: &PhysicalParams, s0: &StateVector, t: f64) -> Result<StateVector> {
    if s0.n_atoms() != p.n_atoms {
        return Err(Error::InvalidArgument(format!(
            "state has N = {} but parameters have N = {}",
            s0.n_atoms(),
            p.n_atoms
        )));
    }
    OracleEvolver::new(p)?.evolve(s0, t)
}

/// Gershgorin bound on the spectral radius of the lab-frame Hamiltonian
/// (independent of time, since the coupling only rotates in phase).
pub fn spectral_radius_bound(p: &PhysicalParams) -> f64 {
    let diag = lab_diagonal(p);
    let off = ladder_coefficients(p.n_atoms);
    (0..diag.len())
        .map(|k| {
            let left = if k > 0 { off[k - 1] } else { 0.0 };
            let right = off.get(k).copied().unwrap_or(0.0);
            diag[k].abs() + p.g * (left + right)
        })
        .fold(0.0, f64::max)
}

/// Fourth-order Runge-Kutta integration of `i ∂_t ψ = H(t) ψ` with the
/// lab-frame Hamiltonian, whose coupling carries `e^{∓iΔt}`.
///
/// The interval is split into `ceil(t / dt)` equal steps. The result is not
/// renormalized.
pub fn evolve_rk4(p: &PhysicalParams, s0: &StateVector, t: f64, dt: f64) -> Result<StateVector> {
    p.validate()?;
    check_time(t)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive and finite, got {dt}")));
    }
    if s0.n_atoms() != p.n_atoms {
        return Err(Error::InvalidArgument(format!(
            "state has N = {} but parameters have N = {}",
            s0.n_atoms(),
            p.n_atoms
        )));
    }
    let product = dt * spectral_radius_bound(p);
    if product >= RK4_STABILITY_LIMIT {
        return Err(Error::StepTooLarge { product, limit: RK4_STABILITY_LIMIT });
    }

    let diag = lab_diagonal(p);
    let coupling: Vec<f64> = ladder_coefficients(p.n_atoms).into_iter().map(|s| -p.g * s).collect();
    let dim = diag.len();
    // dψ/dt = −i H(τ) ψ
    let rhs = |tau: f64, psi: &[C64], out: &mut [C64]| {
        let up = C64::from_polar(1.0, -p.delta * tau);
        let down = up.conj();
        for k in 0..dim {
            let mut acc = psi[k] * diag[k];
            if k + 1 < dim {
                acc += psi[k + 1] * coupling[k] * up;
            }
            if k > 0 {
                acc += psi[k - 1] * coupling[k - 1] * down;
            }
            out[k] = C64::new(acc.im, -acc.re);
        }
    };

    let steps = if t == 0.0 { 0 } else { (t / dt).ceil() as usize };
    let h = if steps > 0 { t / steps as f64 } else { 0.0 };
    let mut psi: Vec<C64> = s0.amplitudes().iter().copied().collect();
    let zero = C64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; dim], vec![zero; dim], vec![zero; dim], vec![zero; dim]);
    let mut tmp = vec![zero; dim];
    for step in 0..steps {
        let tau = step as f64 * h;
        rhs(tau, &psi, &mut k1);
        for i in 0..dim {
            tmp[i] = psi[i] + k1[i] * (h / 2.0);
        }
        rhs(tau + h / 2.0, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = psi[i] + k2[i] * (h / 2.0);
        }
        rhs(tau + h / 2.0, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = psi[i] + k3[i] * h;
        }
        rhs(tau + h, &tmp, &mut k4);
        for i in 0..dim {
            psi[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
        }
    }
    Ok(StateVector::unchecked(DVector::from_vec(psi)))
}
