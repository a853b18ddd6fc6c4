//! Contexts, modalities, and extravalence classes.
//!
//! A context is an ordered family of N mutually orthogonal rank-one
//! projectors summing to the identity, together with one outcome label per
//! projector. A modality is a single outcome of a context. Modalities of
//! different contexts whose projectors coincide are linked with certainty;
//! they form an extravalence class represented by the shared projector.
//!
//! Labels are carried as data, not semantics: the physical meaning (e.g.
//! angular momentum in units of hbar) lives in the scenario definitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigendecomposition, Complex64, ComplexMatrix, HermitianObservable, RankOneProjector,
    UnitaryMatrix,
};
use crate::tolerances::{DEGENERACY_GAP, MAX_DIM, TOL_EXTRA, TOL_UNITARY};

/// Complete measurement arrangement: N orthogonal rank-one projectors
/// summing to the identity, in a fixed order, with one label per outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ContextJson", into = "ContextJson")]
pub struct Context {
    dim: usize,
    projectors: Vec<RankOneProjector>,
    labels: Vec<f64>,
    name: Option<String>,
}

impl Context {
    /// Validate orthogonality and completeness of the projector family.
    pub fn new(projectors: Vec<RankOneProjector>, labels: Vec<f64>) -> Result<Self> {
        let dim = projectors.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidDimension(dim));
        }
        if projectors.iter().any(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch(projectors[0].dim(), dim));
        }
        if labels.len() != dim {
            return Err(Error::LabelCountMismatch {
                expected: dim,
                found: labels.len(),
            });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let overlap = projectors[i].overlap(&projectors[j])?;
                if overlap >= TOL_UNITARY {
                    return Err(Error::Certification(format!(
                        "projectors {i} and {j} are not orthogonal (trace overlap {overlap:.3e})"
                    )));
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(dim, dim)?;
        for p in &projectors {
            sum = sum.add(&p.matrix())?;
        }
        let completeness = sum.frobenius_distance(&ComplexMatrix::identity(dim)?)?;
        if completeness >= TOL_UNITARY {
            return Err(Error::Certification(format!(
                "projector family does not sum to the identity (residual {completeness:.3e})"
            )));
        }
        Ok(Self {
            dim,
            projectors,
            labels,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[RankOneProjector] {
        &self.projectors
    }

    pub fn projector(&self, index: usize) -> &RankOneProjector {
        &self.projectors[index]
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Stable identifier: the explicit name if set, otherwise a digest of
    /// the canonical projector vectors and labels.
    pub fn context_id(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        // FNV-1a over the canonical representation; stable across runs.
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |bits: u64| {
            for byte in bits.to_le_bytes() {
                hash ^= byte as u64;
                hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        for p in &self.projectors {
            for z in p.vector() {
                eat(z.re.to_bits());
                eat(z.im.to_bits());
            }
        }
        for l in &self.labels {
            eat(l.to_bits());
        }
        format!("ctx-{hash:016x}")
    }

    pub fn modality(&self, index: usize) -> Result<Modality<'_>> {
        if index >= self.dim {
            return Err(Error::InvalidParameter(format!(
                "modality index {index} out of range for dimension {}",
                self.dim
            )));
        }
        Ok(Modality {
            context: self,
            index,
        })
    }

    pub fn modalities(&self) -> Vec<Modality<'_>> {
        (0..self.dim)
            .map(|index| Modality {
                context: self,
                index,
            })
            .collect()
    }

    /// Index of the outcome whose label matches within `tol`.
    pub fn index_of_label(&self, label: f64, tol: f64) -> Option<usize> {
        self.labels.iter().position(|&l| (l - label).abs() <= tol)
    }

    /// Projector-wise comparison, order sensitive.
    pub fn approx_eq(&self, other: &Context, tol: f64) -> Result<bool> {
        if self.dim != other.dim {
            return Ok(false);
        }
        for (p, q) in self.projectors.iter().zip(&other.projectors) {
            if !p.approx_eq(q, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// JSON form: `{dim, labels, vectors}` with each vector a list of
/// `[re, im]` pairs in the canonical phase-fixed form.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ContextJson {
    dim: usize,
    labels: Vec<f64>,
    vectors: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl From<Context> for ContextJson {
    fn from(c: Context) -> Self {
        ContextJson {
            dim: c.dim,
            labels: c.labels.clone(),
            vectors: c
                .projectors
                .iter()
                .map(|p| p.vector().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            name: c.name,
        }
    }
}

impl TryFrom<ContextJson> for Context {
    type Error = Error;

    fn try_from(j: ContextJson) -> Result<Self> {
        if j.vectors.len() != j.dim {
            return Err(Error::DimensionMismatch(j.vectors.len(), j.dim));
        }
        let projectors: Vec<RankOneProjector> = j
            .vectors
            .iter()
            .map(|v| {
                let entries: Vec<Complex64> =
                    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                RankOneProjector::from_vector(&entries)
            })
            .collect::<Result<_>>()?;
        let ctx = Context::new(projectors, j.labels)?;
        Ok(match j.name {
            Some(name) => ctx.with_name(name),
            None => ctx,
        })
    }
}

/// One outcome of a context: the pair (context, outcome index).
#[derive(Debug, Clone, Copy)]
pub struct Modality<'a> {
    context: &'a Context,
    index: usize,
}

impl<'a> Modality<'a> {
    pub fn context(&self) -> &'a Context {
        self.context
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn label(&self) -> f64 {
        self.context.labels[self.index]
    }

    pub fn projector(&self) -> &'a RankOneProjector {
        &self.context.projectors[self.index]
    }

    pub fn dim(&self) -> usize {
        self.context.dim
    }
}

/// Equivalence class of modalities linked with certainty across contexts,
/// represented by the shared rank-one projector in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtravalenceClass {
    representative: RankOneProjector,
}

impl ExtravalenceClass {
    pub fn from_projector(representative: RankOneProjector) -> Self {
        Self { representative }
    }

    pub fn dim(&self) -> usize {
        self.representative.dim()
    }

    pub fn representative(&self) -> &RankOneProjector {
        &self.representative
    }

    pub fn same_class(&self, other: &ExtravalenceClass) -> Result<bool> {
        self.representative
            .approx_eq(&other.representative, TOL_EXTRA)
    }
}

/// Context whose i-th projector is built from column i of the unitary.
/// Default labels are the outcome indices 0..N-1.
pub fn context_from_unitary(u: &UnitaryMatrix, labels: Option<Vec<f64>>) -> Result<Context> {
    let n = u.dim();
    let labels = match labels {
        Some(l) => {
            if l.len() != n {
                return Err(Error::LabelCountMismatch {
                    expected: n,
                    found: l.len(),
                });
            }
            l
        }
        None => (0..n).map(|i| i as f64).collect(),
    };
    let projectors: Vec<RankOneProjector> = (0..n)
        .map(|i| RankOneProjector::from_vector(&u.column(i)))
        .collect::<Result<_>>()?;
    Context::new(projectors, labels)
}

/// Context of eigenprojectors of a Hermitian observable, labels the
/// eigenvalues in descending order. Rejects spectra with a gap below
/// `degeneracy_gap`, since a degenerate eigenspace has no rank-one
/// projector decomposition canonically attached to the observable.
pub fn context_from_observable(a: &HermitianObservable, degeneracy_gap: f64) -> Result<Context> {
    let (eigenvalues, vectors) = hermitian_eigendecomposition(a)?;
    for w in eigenvalues.windows(2) {
        let gap = w[0] - w[1];
        if gap < degeneracy_gap {
            return Err(Error::DegenerateObservable {
                gap,
                required: degeneracy_gap,
            });
        }
    }
    context_from_unitary(&vectors, Some(eigenvalues))
}

/// Angular momentum operators (Jx, Jy, Jz) for spin j, built from the
/// ladder operators: Jz = diag(j, j-1, ..., -j) and
/// <m+1|J+|m> = sqrt(j(j+1) - m(m+1)).
pub fn spin_operators(
    j: f64,
) -> Result<(HermitianObservable, HermitianObservable, HermitianObservable)> {
    let two_j = 2.0 * j;
    if j < 0.0 || (two_j - two_j.round()).abs() > 1e-9 || !two_j.is_finite() {
        return Err(Error::InvalidSpin(j));
    }
    let dim = two_j.round() as usize + 1;
    if dim > MAX_DIM {
        return Err(Error::InvalidSpin(j));
    }
    let m_of = |k: usize| j - k as f64;

    let jz = HermitianObservable::from_real_diagonal(
        &(0..dim).map(m_of).collect::<Vec<_>>(),
    )?;

    let mut raising = ComplexMatrix::zeros(dim, dim)?;
    for k in 1..dim {
        // raises m_k to m_k + 1, i.e. index k to index k-1
        let m = m_of(k);
        let amp = (j * (j + 1.0) - m * (m + 1.0)).sqrt();
        raising.set(k - 1, k, Complex64::new(amp, 0.0));
    }
    let lowering = raising.dagger();

    let jx = HermitianObservable::new(
        raising.add(&lowering)?.scale(Complex64::new(0.5, 0.0)),
    )?;
    let jy = HermitianObservable::new(
        raising.sub(&lowering)?.scale(Complex64::new(0.0, -0.5)),
    )?;
    Ok((jx, jy, jz))
}

/// Context of eigenprojectors of the angular momentum along `direction`
/// (normalized internally), labels m = j, j-1, ..., -j.
pub fn spin_context(j: f64, direction: [f64; 3]) -> Result<Context> {
    let norm = (direction.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let n = [direction[0] / norm, direction[1] / norm, direction[2] / norm];
    let (jx, jy, jz) = spin_operators(j)?;
    let along = jx
        .matrix()
        .scale(Complex64::new(n[0], 0.0))
        .add(&jy.matrix().scale(Complex64::new(n[1], 0.0)))?
        .add(&jz.matrix().scale(Complex64::new(n[2], 0.0)))?;
    let ctx = context_from_observable(&HermitianObservable::new(along)?, DEGENERACY_GAP)?;
    // The eigenvalues are the exact m values up to rounding; snap the labels.
    let dim = ctx.dim();
    let exact: Vec<f64> = (0..dim).map(|k| j - k as f64).collect();
    Context::new(ctx.projectors().to_vec(), exact)
}

/// Qubit projector onto the +1 eigenstate of n.sigma for a unit Bloch
/// vector n: the spinor (cos(theta/2), e^{i phi} sin(theta/2)).
pub fn bloch_projector(direction: [f64; 3]) -> Result<RankOneProjector> {
    let norm = (direction.iter().map(|x| x * x).sum::<f64>()).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let [x, y, z] = [direction[0] / norm, direction[1] / norm, direction[2] / norm];
    let theta = z.acos();
    let phi = y.atan2(x);
    let v = [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ];
    RankOneProjector::from_vector(&v)
}

/// True iff the projectors of the two modalities coincide within the
/// extravalence tolerance; equivalently, the transition probability
/// between them is 1.
pub fn extravalent(m1: &Modality<'_>, m2: &Modality<'_>) -> Result<bool> {
    if m1.dim() != m2.dim() {
        return Err(Error::DimensionMismatch(m1.dim(), m2.dim()));
    }
    m1.projector().approx_eq(m2.projector(), TOL_EXTRA)
}

/// Canonical extravalence class of a modality: its projector in
/// phase-fixed form.
pub fn extravalence_class_of(m: &Modality<'_>) -> ExtravalenceClass {
    ExtravalenceClass::from_projector(m.projector().clone())
}
