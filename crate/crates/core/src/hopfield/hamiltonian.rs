use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::coupling::CouplingSet;
use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_residual, max_abs};
use crate::profile::{InPlaneField, ModeLabel};
use crate::C64;

/// Which parts of the Hamiltonian are assembled.
///
/// `rwa_only` keeps only the number-conserving parts of H_int and H_A²
/// (`a†b`, `a†a'`, including the diagonal `a†a` shift of the A² term);
/// `antiresonant_only` keeps only `ab`, `aa'` and their conjugates. The bare
/// energies `ω_p a†a` and `ω_c b†b` are always present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HamiltonianFlags {
    pub include_hint: bool,
    pub include_a2: bool,
    pub rwa_only: bool,
    pub antiresonant_only: bool,
    /// One orthogonal CR mode per photon mode with coupling Ω_p and a diagonal
    /// A² term `Ω_p²/ω_c`.
    pub decoupled: bool,
}

impl Default for HamiltonianFlags {
    fn default() -> Self {
        TermSelection::Full.flags()
    }
}

impl HamiltonianFlags {
    pub fn validate(&self) -> Result<()> {
        if self.rwa_only && self.antiresonant_only {
            return Err(invalid(
                "flags",
                "rwa_only and antiresonant_only are mutually exclusive",
            ));
        }
        Ok(())
    }

    fn keep_resonant(&self) -> bool {
        !self.antiresonant_only
    }

    fn keep_antiresonant(&self) -> bool {
        !self.rwa_only
    }
}

/// Named term selections used by configs and the term-toggle studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermSelection {
    Full,
    Decoupled,
    Rwa,
    Antiresonant,
    A2Only,
    HintOnly,
}

impl TermSelection {
    pub const ALL: [TermSelection; 6] = [
        TermSelection::Full,
        TermSelection::Decoupled,
        TermSelection::Rwa,
        TermSelection::Antiresonant,
        TermSelection::A2Only,
        TermSelection::HintOnly,
    ];

    pub fn flags(self) -> HamiltonianFlags {
        let full = HamiltonianFlags {
            include_hint: true,
            include_a2: true,
            rwa_only: false,
            antiresonant_only: false,
            decoupled: false,
        };
        match self {
            TermSelection::Full => full,
            TermSelection::Decoupled => HamiltonianFlags {
                decoupled: true,
                ..full
            },
            TermSelection::Rwa => HamiltonianFlags {
                rwa_only: true,
                ..full
            },
            TermSelection::Antiresonant => HamiltonianFlags {
                antiresonant_only: true,
                ..full
            },
            TermSelection::A2Only => HamiltonianFlags {
                include_hint: false,
                ..full
            },
            TermSelection::HintOnly => HamiltonianFlags {
                include_a2: false,
                ..full
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TermSelection::Full => "full",
            TermSelection::Decoupled => "decoupled",
            TermSelection::Rwa => "rwa",
            TermSelection::Antiresonant => "antiresonant",
            TermSelection::A2Only => "a2-only",
            TermSelection::HintOnly => "hint-only",
        }
    }
}

impl fmt::Display for TermSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonMode {
    pub label: ModeLabel,
    pub omega: f64,
    pub quality: f64,
}

/// A CR mode of the matter sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MatterMode {
    /// `b_G` with `G = 2π m / a`.
    Reciprocal([i32; 2]),
    /// Collective mode `b_{p,σ}` of the decoupled Hamiltonian.
    Collective(ModeLabel),
}

impl fmt::Display for MatterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatterMode::Reciprocal(m) => write!(f, "G({},{})", m[0], m[1]),
            MatterMode::Collective(l) => write!(f, "b{l}"),
        }
    }
}

/// Quadratic bosonic Hamiltonian in `(a, b, a†, b†)` block form.
#[derive(Debug, Clone)]
pub struct HopfieldMatrix {
    photons: Vec<PhotonMode>,
    matter: Vec<MatterMode>,
    m: DMatrix<C64>,
    flags: HamiltonianFlags,
    omega_c: f64,
    b_field: Option<f64>,
}

impl HopfieldMatrix {
    /// Assembles `M` from the normal block `A` (Hermitian) and the anomalous
    /// block `B` (symmetric), both of size `n_photon + n_matter`.
    pub fn from_blocks(
        photons: Vec<PhotonMode>,
        matter: Vec<MatterMode>,
        a: &DMatrix<C64>,
        b: &DMatrix<C64>,
        omega_c: f64,
        flags: HamiltonianFlags,
    ) -> Result<Self> {
        let n = photons.len() + matter.len();
        if a.shape() != (n, n) || b.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!(
                "blocks are {:?} and {:?}, expected {n}x{n}",
                a.shape(),
                b.shape()
            )));
        }
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((0, n), (n, n)).copy_from(b);
        m.view_mut((n, 0), (n, n)).copy_from(&b.map(|z| z.conj()));
        m.view_mut((n, n), (n, n)).copy_from(&a.map(|z| z.conj()));
        let h = Self {
            photons,
            matter,
            m,
            flags,
            omega_c,
            b_field: None,
        };
        h.check_structure()?;
        Ok(h)
    }

    pub fn n_photon(&self) -> usize {
        self.photons.len()
    }

    pub fn n_matter(&self) -> usize {
        self.matter.len()
    }

    /// Number of bosonic modes `n_photon + n_matter`.
    pub fn n_modes(&self) -> usize {
        self.photons.len() + self.matter.len()
    }

    pub fn photons(&self) -> &[PhotonMode] {
        &self.photons
    }

    pub fn matter(&self) -> &[MatterMode] {
        &self.matter
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn normal_block(&self) -> DMatrix<C64> {
        let n = self.n_modes();
        self.m.view((0, 0), (n, n)).into_owned()
    }

    pub fn anomalous_block(&self) -> DMatrix<C64> {
        let n = self.n_modes();
        self.m.view((0, n), (n, n)).into_owned()
    }

    pub fn flags(&self) -> HamiltonianFlags {
        self.flags
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// Magnetic field the matrix was built for, when known.
    pub fn b_field(&self) -> Option<f64> {
        self.b_field
    }

    pub fn with_b_field(mut self, b: f64) -> Self {
        self.b_field = Some(b);
        self
    }

    /// Dynamical matrix `ηM`.
    pub fn dynamical(&self) -> DMatrix<C64> {
        let n = self.n_modes();
        let mut d = self.m.clone();
        for i in n..2 * n {
            for j in 0..2 * n {
                d[(i, j)] = -d[(i, j)];
            }
        }
        d
    }

    /// Verifies Hermiticity and the `[[A, B], [B*, A*]]` pattern.
    pub fn check_structure(&self) -> Result<()> {
        let scale = max_abs(&self.m).max(f64::MIN_POSITIVE);
        let tol = 1e-12 * scale;
        if self.m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("hamiltonian", "non-finite matrix entry"));
        }
        let herm = hermitian_residual(&self.m);
        if herm > tol {
            return Err(Error::NotHermitian(herm / scale));
        }
        let n = self.n_modes();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                r = r.max((self.m[(i + n, j + n)] - self.m[(i, j)].conj()).norm());
                r = r.max((self.m[(i + n, j)] - self.m[(i, j + n)].conj()).norm());
                r = r.max((self.m[(i, j + n)] - self.m[(j, i + n)]).norm());
            }
        }
        if r > tol {
            return Err(Error::NotBosonic(r / scale));
        }
        Ok(())
    }
}

/// Assembles the Hamiltonian of the modes in `cs` at its cyclotron frequency.
///
/// The full (non-decoupled) form needs Fourier-represented coupling fields:
/// the matter sector has one `b_G` per reciprocal vector present in any mode
/// (closed under `G → -G`), coupled with strength `g̃_p(-G)`.
pub fn build_hamiltonian(cs: &CouplingSet, flags: HamiltonianFlags) -> Result<HopfieldMatrix> {
    flags.validate()?;
    let omega_c = cs.omega_c();
    if flags.include_a2 && !(omega_c > 0.0) {
        return Err(Error::ZeroCyclotronFrequency);
    }
    let photons: Vec<PhotonMode> = cs
        .modes()
        .iter()
        .map(|m| PhotonMode {
            label: m.label,
            omega: m.omega,
            quality: m.quality,
        })
        .collect();
    let np = photons.len();

    let (matter, coupling, d) = if flags.decoupled {
        decoupled_sector(cs)
    } else {
        reciprocal_sector(cs)?
    };
    let nm = matter.len();
    let n = np + nm;

    let mut a = DMatrix::<C64>::zeros(n, n);
    let mut b = DMatrix::<C64>::zeros(n, n);
    for (p, ph) in photons.iter().enumerate() {
        a[(p, p)] = C64::new(ph.omega, 0.0);
    }
    for k in 0..nm {
        a[(np + k, np + k)] = C64::new(omega_c, 0.0);
    }
    if flags.include_hint {
        for p in 0..np {
            for k in 0..nm {
                let c = coupling[(p, k)];
                if flags.keep_resonant() {
                    a[(np + k, p)] += c;
                    a[(p, np + k)] += c.conj();
                }
                if flags.keep_antiresonant() {
                    b[(np + k, p)] += c;
                    b[(p, np + k)] += c;
                }
            }
        }
    }
    if flags.include_a2 {
        for p in 0..np {
            for q in 0..np {
                let v = C64::new(2.0 * d[(p, q)], 0.0);
                if flags.keep_resonant() {
                    a[(p, q)] += v;
                }
                if flags.keep_antiresonant() {
                    b[(p, q)] += v;
                }
            }
        }
    }
    HopfieldMatrix::from_blocks(photons, matter, &a, &b, omega_c, flags)
}

/// Matter sector in the reciprocal-lattice basis: modes, photon-matter
/// couplings `c_{pG} = g̃_p(-G)*` and the symmetrized A² matrix.
fn reciprocal_sector(cs: &CouplingSet) -> Result<(Vec<MatterMode>, DMatrix<C64>, DMatrix<f64>)> {
    let mut set = BTreeSet::new();
    for m in cs.modes() {
        match m.reduced_field() {
            InPlaneField::Fourier(f) => {
                for t in f.terms() {
                    set.insert(t.m);
                    set.insert([-t.m[0], -t.m[1]]);
                }
            }
            InPlaneField::Grid(_) => {
                return Err(Error::RequiresFourier(format!(
                    "mode {} is grid-sampled; call CouplingSet::to_fourier first",
                    m.label
                )))
            }
        }
    }
    if set.is_empty() {
        return Err(Error::Empty("Fourier set of the coupling fields"));
    }
    let gs: Vec<[i32; 2]> = set.into_iter().collect();
    let sqrt_wc = cs.omega_c().sqrt();
    let s = cs.chirality();
    let coupling = DMatrix::from_fn(cs.len(), gs.len(), |p, k| {
        let InPlaneField::Fourier(f) = cs.modes()[p].reduced_field() else {
            unreachable!()
        };
        let g = gs[k];
        match f.get([-g[0], -g[1]]) {
            Some(t) => (t.ey - C64::new(0.0, s) * t.ex).conj() * sqrt_wc,
            None => C64::new(0.0, 0.0),
        }
    });
    let d = cs.a2_reduced().map(|z| z.re);
    let matter = gs.into_iter().map(MatterMode::Reciprocal).collect();
    Ok((matter, coupling, d))
}

fn decoupled_sector(cs: &CouplingSet) -> (Vec<MatterMode>, DMatrix<C64>, DMatrix<f64>) {
    let n = cs.len();
    let omegas = cs.effective_couplings();
    let matter = cs.labels().into_iter().map(MatterMode::Collective).collect();
    let coupling = DMatrix::from_fn(n, n, |p, k| {
        if p == k {
            C64::new(omegas[p], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    // Ω_p² / ω_c from the B-independent reduced fields
    let d = DMatrix::from_fn(n, n, |p, q| {
        if p == q && cs.omega_c() > 0.0 {
            omegas[p] * omegas[p] / cs.omega_c()
        } else {
            0.0
        }
    });
    (matter, coupling, d)
}
