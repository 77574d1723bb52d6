//! Matrix-free symmetric operators.
//!
//! Solvers only ever touch `A` through [`SymmetricOperator::apply_into`], so a
//! Hessian-vector product closure works as well as an explicit matrix. Two
//! concrete backings are provided ([`Diagonal`] and [`Dense`]) together with a
//! [`Counted`] wrapper that tallies matrix-vector products.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vecops;

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorKind {
    Diagonal,
    Dense,
    Counted(Box<OperatorKind>),
    Custom,
}

pub trait SymmetricOperator: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes `A v` into `out`. Both slices have length [`dim`](Self::dim).
    fn apply_into(&self, v: &[f64], out: &mut [f64]);

    fn kind(&self) -> OperatorKind {
        OperatorKind::Custom
    }

    /// Eigenvalues in coordinate order when the operator is diagonal.
    fn diagonal(&self) -> Option<&[f64]> {
        None
    }

    fn matvec_count(&self) -> Result<u64> {
        Err(Error::Unsupported(
            "matvec_count requires a Counted operator".into(),
        ))
    }

    fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: v.len(),
            });
        }
        let mut out = vec![0.0; v.len()];
        self.apply_into(v, &mut out);
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagonal {
    eigs: Vec<f64>,
}

impl Diagonal {
    pub fn new(eigs: Vec<f64>) -> Result<Self> {
        if eigs.is_empty() {
            return Err(Error::param("diagonal operator needs at least one entry"));
        }
        Ok(Self { eigs })
    }

    pub fn eigs(&self) -> &[f64] {
        &self.eigs
    }
}

impl SymmetricOperator for Diagonal {
    fn dim(&self) -> usize {
        self.eigs.len()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        for ((o, l), x) in out.iter_mut().zip(&self.eigs).zip(v) {
            *o = l * x;
        }
    }

    fn kind(&self) -> OperatorKind {
        OperatorKind::Diagonal
    }

    fn diagonal(&self) -> Option<&[f64]> {
        Some(&self.eigs)
    }
}

/// Row-major dense matrix. Symmetry is the caller's responsibility.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    n: usize,
    data: Vec<f64>,
}

impl Dense {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::param("dense operator needs at least one row"));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n || n == 0 {
            return Err(Error::Dimension {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

impl SymmetricOperator for Dense {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.data.chunks(self.n)) {
            *o = vecops::dot(row, v);
        }
    }

    fn kind(&self) -> OperatorKind {
        OperatorKind::Dense
    }
}

/// Transparent wrapper counting calls to `apply_into`.
///
/// The counter is atomic so a shared operator can be used from several
/// threads; each call adds exactly one.
pub struct Counted {
    inner: Arc<dyn SymmetricOperator>,
    count: AtomicU64,
}

impl Counted {
    pub fn new(inner: Arc<dyn SymmetricOperator>) -> Self {
        Self {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn inner(&self) -> &Arc<dyn SymmetricOperator> {
        &self.inner
    }
}

impl SymmetricOperator for Counted {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.apply_into(v, out);
    }

    fn kind(&self) -> OperatorKind {
        OperatorKind::Counted(Box::new(self.inner.kind()))
    }

    fn diagonal(&self) -> Option<&[f64]> {
        self.inner.diagonal()
    }

    fn matvec_count(&self) -> Result<u64> {
        Ok(self.count.load(Ordering::Relaxed))
    }
}

/// JSON description of a matrix as it appears in instance files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MatrixSpec {
    Diagonal { eigs: Vec<f64> },
    Dense { rows: Vec<Vec<f64>> },
}

impl MatrixSpec {
    pub fn dim(&self) -> usize {
        match self {
            MatrixSpec::Diagonal { eigs } => eigs.len(),
            MatrixSpec::Dense { rows } => rows.len(),
        }
    }

    pub fn to_operator(&self) -> Result<Arc<dyn SymmetricOperator>> {
        Ok(match self {
            MatrixSpec::Diagonal { eigs } => Arc::new(Diagonal::new(eigs.clone())?),
            MatrixSpec::Dense { rows } => Arc::new(Dense::from_rows(rows)?),
        })
    }

    /// Appends zero rows and columns up to dimension `d`.
    pub fn zero_pad(&mut self, d: usize) {
        match self {
            MatrixSpec::Diagonal { eigs } => {
                if eigs.len() < d {
                    eigs.resize(d, 0.0);
                }
            }
            MatrixSpec::Dense { rows } => {
                let n = rows.len();
                if n < d {
                    for row in rows.iter_mut() {
                        row.resize(d, 0.0);
                    }
                    rows.resize(d, vec![0.0; d]);
                }
            }
        }
    }
}

/// `|uᵀAv − vᵀAu| / (‖u‖‖v‖ scale)`; a cheap probabilistic symmetry probe.
pub fn symmetry_defect(
    op: &dyn SymmetricOperator,
    u: &[f64],
    v: &[f64],
    scale: f64,
) -> Result<f64> {
    let au = op.apply(u)?;
    let av = op.apply(v)?;
    let lhs = vecops::dot(u, &av);
    let rhs = vecops::dot(v, &au);
    let denom = vecops::norm(u) * vecops::norm(v) * scale.max(f64::MIN_POSITIVE);
    Ok((lhs - rhs).abs() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_action() {
        let op = Diagonal::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(op.apply(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(op.apply(&[0.0; 3]).unwrap(), vec![0.0; 3]);
        for i in 0..3 {
            let mut e = vec![0.0; 3];
            e[i] = 1.0;
            let ae = op.apply(&e).unwrap();
            assert_eq!(ae[i], op.eigs()[i]);
        }
    }

    #[test]
    fn dense_permutation() {
        let op = Dense::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(op.apply(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(op.apply(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let op = Diagonal::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            op.apply(&[1.0]),
            Err(Error::Dimension {
                expected: 2,
                got: 1
            })
        ));
        assert!(Dense::from_rows(&[vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    #[test]
    fn counter() {
        let inner: Arc<dyn SymmetricOperator> = Arc::new(Diagonal::new(vec![2.0, 5.0]).unwrap());
        let counted = Counted::new(inner.clone());
        assert_eq!(counted.matvec_count().unwrap(), 0);
        let v = [0.3, -1.7];
        for _ in 0..3 {
            let a = counted.apply(&v).unwrap();
            let b = inner.apply(&v).unwrap();
            assert_eq!(a, b);
        }
        assert_eq!(counted.matvec_count().unwrap(), 3);
        assert!(matches!(inner.matvec_count(), Err(Error::Unsupported(_))));
        assert_eq!(
            counted.kind(),
            OperatorKind::Counted(Box::new(OperatorKind::Diagonal))
        );
    }

    #[test]
    fn counter_is_atomic_across_threads() {
        let inner: Arc<dyn SymmetricOperator> = Arc::new(Diagonal::new(vec![1.0; 8]).unwrap());
        let counted = Arc::new(Counted::new(inner));
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let c = counted.clone();
                std::thread::spawn(move || {
                    for _ in 0..250 {
                        c.apply(&[1.0; 8]).unwrap();
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
        assert_eq!(counted.matvec_count().unwrap(), 1000);
    }

    #[test]
    fn matrix_spec_json() {
        let spec: MatrixSpec = serde_json::from_str(r#"{"type":"diagonal","eigs":[1,2]}"#).unwrap();
        assert_eq!(
            spec,
            MatrixSpec::Diagonal {
                eigs: vec![1.0, 2.0]
            }
        );
        let spec: MatrixSpec =
            serde_json::from_str(r#"{"type":"dense","rows":[[0,1],[1,0]]}"#).unwrap();
        let op = spec.to_operator().unwrap();
        assert_eq!(op.kind(), OperatorKind::Dense);
        let mut padded = spec.clone();
        padded.zero_pad(3);
        assert_eq!(padded.dim(), 3);
        let op3 = padded.to_operator().unwrap();
        assert_eq!(op3.apply(&[1.0, 0.0, 5.0]).unwrap(), vec![0.0, 1.0, 0.0]);
    }
}
