//! Two-mode Fock space with fixed total number N.
//!
//! Basis index `k` labels the state with `n_a = N − k` atoms in mode `a` and
//! `n_b = k` atoms in mode `b`. The qubit states are `|0⟩ = (k = 0)` (all atoms
//! in `a`) and `|1⟩ = (k = N)` (all atoms in `b`).
//!
//! Pseudo-spin operators follow the factor-free Schwinger convention
//! `J_x = a†b + ab†`, `J_y = −i(a†b − ab†)`, `J_z = n_a − n_b`, so that
//! `[J_x, J_y] = 2i J_z` and N = 1 gives the Pauli matrices.

use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{format_float, C64};

const NORM_TOL: f64 = 1e-12;

/// Normalized N-boson state in the two-mode Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_atoms: usize,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Wraps `amplitudes` (length N + 1), checking the norm is 1 within 1e-12.
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let state = Self::from_amplitudes(amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("state norm is {norm}, expected 1")));
        }
        Ok(state)
    }

    /// Wraps and rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let mut state = Self::from_amplitudes(amplitudes)?;
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument(format!("cannot normalize a state of norm {norm}")));
        }
        state.amplitudes.unscale_mut(norm);
        Ok(state)
    }

    /// Wraps without any norm check. Used for integrator output whose norm
    /// drift is itself a diagnostic.
    pub(crate) fn unchecked(amplitudes: DVector<C64>) -> Self {
        let n_atoms = amplitudes.len() - 1;
        Self { n_atoms, amplitudes }
    }

    fn from_amplitudes(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a state needs N + 1 >= 2 amplitudes, got {}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("state has non-finite amplitudes".into()));
        }
        Ok(Self::unchecked(amplitudes))
    }

    /// Fock basis state with `n_b = k`.
    pub fn basis(n_atoms: usize, k: usize) -> Result<Self> {
        check_n(n_atoms)?;
        if k > n_atoms {
            return Err(Error::InvalidArgument(format!("basis index {k} exceeds N = {n_atoms}")));
        }
        let mut amplitudes = DVector::zeros(n_atoms + 1);
        amplitudes[k] = C64::new(1.0, 0.0);
        Ok(Self { n_atoms, amplitudes })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        self.n_atoms + 1
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidArgument(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Population of each basis state.
    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Writes `k,re,im` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["k", "re", "im"])?;
        for (k, c) in self.amplitudes.iter().enumerate() {
            w.write_record([k.to_string(), format_float(c.re), format_float(c.im)])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the format produced by [`StateVector::write_csv`].
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            k: usize,
            re: f64,
            im: f64,
        }
        let mut r = csv::Reader::from_reader(reader);
        let mut amps = Vec::new();
        for (i, row) in r.deserialize::<Row>().enumerate() {
            let row = row?;
            if row.k != i {
                return Err(Error::InvalidArgument(format!("row {i} has k = {}, expected {i}", row.k)));
            }
            amps.push(C64::new(row.re, row.im));
        }
        Self::new(DVector::from_vec(amps))
    }
}

/// Bloch vector (⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// Bloch-sphere angles of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcsParams {
    /// Polar angle in [0, π].
    pub theta: f64,
    /// Azimuth in [0, 2π).
    pub phi: f64,
}

impl AcsParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let a = Self { theta, phi };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::param("theta", format!("must lie in [0, π], got {}", self.theta)));
        }
        if !(0.0..TAU).contains(&self.phi) {
            return Err(Error::param("phi", format!("must lie in [0, 2π), got {}", self.phi)));
        }
        Ok(())
    }

    /// Qubit amplitudes (α, β) = (cos θ/2, sin θ/2 e^{iφ}).
    pub fn spinor(&self) -> (C64, C64) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        (C64::new(c, 0.0), C64::from_polar(s, self.phi))
    }

    /// Angles of the normalized spinor (α, β), discarding its global phase.
    pub fn from_spinor(alpha: C64, beta: C64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("spinor must be non-zero and finite".into()));
        }
        let theta = 2.0 * beta.norm().atan2(alpha.norm());
        let mut phi = if alpha.norm() == 0.0 || beta.norm() == 0.0 {
            0.0
        } else {
            (beta.arg() - alpha.arg()).rem_euclid(TAU)
        };
        if phi >= TAU {
            phi = 0.0;
        }
        Self::new(theta.clamp(0.0, PI), phi)
    }

    pub fn bloch(&self) -> BlochVector {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        BlochVector::new(st * cp, st * sp, ct)
    }
}

/// Coherent state `|θ, φ⟩` of N atoms.
pub fn acs_state(a: &AcsParams, n_atoms: usize) -> Result<StateVector> {
    a.validate()?;
    let (alpha, beta) = a.spinor();
    acs_from_spinor(alpha, beta, n_atoms)
}

/// Coherent state `(α a† + β b†)^N |vac⟩ / √N!` for an arbitrary non-zero
/// spinor, normalized. Amplitude `k` is `√C(N,k) α^{N−k} β^k`.
pub fn acs_from_spinor(alpha: C64, beta: C64, n_atoms: usize) -> Result<StateVector> {
    check_n(n_atoms)?;
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidArgument("spinor must be non-zero and finite".into()));
    }
    let (alpha, beta) = (alpha / norm, beta / norm);
    let n = n_atoms;
    let (ra, pa) = alpha.to_polar();
    let (rb, pb) = beta.to_polar();
    let (la, lb) = (ra.ln(), rb.ln());
    // Log-space magnitudes so that N ~ 1000 neither under- nor overflows
    // before the binomial weight is applied.
    let mut ln_binom = 0.0f64;
    let mut amps = DVector::zeros(n + 1);
    for k in 0..=n {
        if k > 0 {
            ln_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let mut ln_mag = 0.5 * ln_binom;
        if n - k > 0 {
            ln_mag += (n - k) as f64 * la;
        }
        if k > 0 {
            ln_mag += k as f64 * lb;
        }
        let phase = (n - k) as f64 * pa + k as f64 * pb;
        amps[k] = C64::from_polar(ln_mag.exp(), phase);
    }
    StateVector::normalized(amps)
}

/// `√((N − k)(k + 1))` for k = 0..N−1: the matrix element of `a†b` between
/// `|k + 1⟩` and `|k⟩`.
pub fn ladder_coefficients(n_atoms: usize) -> Vec<f64> {
    (0..n_atoms).map(|k| (((n_atoms - k) * (k + 1)) as f64).sqrt()).collect()
}

/// Dense pseudo-spin operators on the (N+1)-dimensional space.
#[derive(Debug, Clone)]
pub struct PseudoSpin {
    pub jx: DMatrix<C64>,
    pub jy: DMatrix<C64>,
    pub jz: DMatrix<C64>,
}

pub fn pseudo_spin_matrices(n_atoms: usize) -> Result<PseudoSpin> {
    check_n(n_atoms)?;
    let dim = n_atoms + 1;
    let mut jx = DMatrix::zeros(dim, dim);
    let mut jy = DMatrix::zeros(dim, dim);
    let mut jz = DMatrix::zeros(dim, dim);
    for (k, s) in ladder_coefficients(n_atoms).into_iter().enumerate() {
        // a†b at (k, k + 1), ab† at (k + 1, k)
        jx[(k, k + 1)] = C64::new(s, 0.0);
        jx[(k + 1, k)] = C64::new(s, 0.0);
        jy[(k, k + 1)] = C64::new(0.0, -s);
        jy[(k + 1, k)] = C64::new(0.0, s);
    }
    for k in 0..dim {
        jz[(k, k)] = C64::new(n_atoms as f64 - 2.0 * k as f64, 0.0);
    }
    Ok(PseudoSpin { jx, jy, jz })
}

/// Normalized pseudo-spin expectation values of `s`.
pub fn bloch_vector(s: &StateVector) -> BlochVector {
    let c = s.amplitudes();
    let n = s.n_atoms();
    let mut jz = 0.0;
    for (k, ck) in c.iter().enumerate() {
        jz += ck.norm_sqr() * (n as f64 - 2.0 * k as f64);
    }
    // ⟨a†b⟩ = Σ conj(c_k) s_k c_{k+1}
    let mut raise = C64::new(0.0, 0.0);
    for (k, s_k) in ladder_coefficients(n).into_iter().enumerate() {
        raise += c[k].conj() * c[k + 1] * s_k;
    }
    let nf = n as f64;
    BlochVector::new(2.0 * raise.re / nf, 2.0 * raise.im / nf, jz / nf)
}

pub(crate) fn check_n(n_atoms: usize) -> Result<()> {
    if n_atoms < 1 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    Ok(())
}
