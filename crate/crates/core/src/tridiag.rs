//! Real symmetric tridiagonal matrices and subdiagonal sign involutions.
//!
//! A matrix is stored as its diagonal and subdiagonal; symmetry is implicit.
//! The norm is the Frobenius norm, `‖T‖² = trace(T²)`. Conjugation by a
//! diagonal orthogonal matrix `E` (entries ±1) changes only subdiagonal
//! signs and is the basic symmetry of everything in this crate.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// An `n×n` real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    sub: Vec<f64>,
}

impl SymTridiagonal {
    /// Builds a validated matrix from its diagonal and subdiagonal.
    ///
    /// Requires `sub.len() == diag.len() - 1`, `diag` nonempty, and all
    /// entries finite.
    pub fn new(diag: Vec<f64>, sub: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if sub.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                got: sub.len(),
            });
        }
        for (i, x) in diag.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteEntry { role: "diag", index: i });
            }
        }
        for (i, x) in sub.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteEntry { role: "sub", index: i });
            }
        }
        Ok(Self { diag, sub })
    }

    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(diag: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        Self::new(diag, vec![0.0; n.saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    /// Lowest subdiagonal entry `(T)_{n,n-1}`; `None` for `n = 1`.
    pub fn b1(&self) -> Option<f64> {
        self.sub.last().copied()
    }

    /// Second-lowest subdiagonal entry `(T)_{n-1,n-2}`; `None` for `n < 3`.
    pub fn b2(&self) -> Option<f64> {
        let n = self.n();
        if n >= 3 {
            Some(self.sub[n - 3])
        } else {
            None
        }
    }

    /// Corner entry `(T)_{n,n}`.
    pub fn corner(&self) -> f64 {
        *self.diag.last().unwrap()
    }

    /// Entry `(T)_{n-1,n-1}`; `None` for `n = 1`.
    pub fn second_corner(&self) -> Option<f64> {
        let n = self.n();
        if n >= 2 {
            Some(self.diag[n - 2])
        } else {
            None
        }
    }

    /// `|T_{n,n} - T_{n-1,n-1}|`, the distance proxy to the set where the
    /// two trailing corner entries coincide. `None` for `n = 1`.
    pub fn singular_gap(&self) -> Option<f64> {
        self.second_corner().map(|d| (self.corner() - d).abs())
    }

    /// Frobenius norm, `sqrt(trace(T²))`.
    pub fn norm(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|x| x * x).sum();
        let s: f64 = self.sub.iter().map(|x| x * x).sum();
        (d + 2.0 * s).sqrt()
    }

    /// Frobenius distance to another matrix of the same dimension.
    pub fn dist(&self, other: &Self) -> Result<f64> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        let d: f64 = self
            .diag
            .iter()
            .zip(&other.diag)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let s: f64 = self
            .sub
            .iter()
            .zip(&other.sub)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok((d + 2.0 * s).sqrt())
    }

    /// Largest absolute subdiagonal entry (0 for `n = 1`).
    pub fn max_abs_sub(&self) -> f64 {
        self.sub.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// True iff every subdiagonal entry is nonzero (exact comparison).
    /// Vacuously true for `n = 1`.
    pub fn is_unreduced(&self) -> bool {
        self.sub.iter().all(|&x| x != 0.0)
    }

    /// Conjugation `E T E` by a diagonal sign matrix: the diagonal is
    /// untouched and `sub[i]` is multiplied by `signs[i]·signs[i+1]`.
    /// Applying the same pattern twice restores the input bit-exactly.
    pub fn conjugate_by_signs(&self, e: &SignPattern) -> Result<Self> {
        if e.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: e.len(),
            });
        }
        let sub = self
            .sub
            .iter()
            .enumerate()
            .map(|(i, &x)| f64::from(e.signs[i] * e.signs[i + 1]) * x)
            .collect();
        Ok(Self {
            diag: self.diag.clone(),
            sub,
        })
    }

    /// Replaces every subdiagonal entry by its absolute value (conjugation
    /// into the closed positive-subdiagonal cell).
    pub fn drop_signs(&self) -> Self {
        Self {
            diag: self.diag.clone(),
            sub: self.sub.iter().map(|x| x.abs()).collect(),
        }
    }

    /// Leading principal `m×m` block.
    pub fn leading_block(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n() {
            return Err(Error::WrongDimension {
                expected: m,
                got: self.n(),
            });
        }
        Ok(Self {
            diag: self.diag[..m].to_vec(),
            sub: self.sub[..m - 1].to_vec(),
        })
    }

    /// Direct sum `self ⊕ other` with the connecting subdiagonal entry zero.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut diag = self.diag.clone();
        diag.extend_from_slice(&other.diag);
        let mut sub = self.sub.clone();
        sub.push(0.0);
        sub.extend_from_slice(&other.sub);
        Self { diag, sub }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for i in 0..n - 1 {
            m[(i + 1, i)] = self.sub[i];
            m[(i, i + 1)] = self.sub[i];
        }
        m
    }

    /// Text form: one line `n`, one line of diagonal entries, one line of
    /// subdiagonal entries (empty for `n = 1`), full round-trip precision.
    pub fn to_text(&self) -> String {
        let fmt = |xs: &[f64]| {
            xs.iter()
                .map(|x| format!("{x:.16e}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!("{}\n{}\n{}\n", self.n(), fmt(&self.diag), fmt(&self.sub))
    }

    /// Parses the text form written by [`to_text`](Self::to_text).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing dimension line".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad dimension: {e}")))?;
        if n == 0 {
            return Err(Error::Parse("dimension must be at least 1".into()));
        }
        let parse_line = |line: Option<&str>, want: usize, what: &str| -> Result<Vec<f64>> {
            let line = match line {
                Some(l) => l,
                None if want == 0 => "",
                None => return Err(Error::Parse(format!("missing {what} line"))),
            };
            let vals: std::result::Result<Vec<f64>, _> =
                line.split_whitespace().map(str::parse).collect();
            let vals = vals.map_err(|e| Error::Parse(format!("bad {what} entry: {e}")))?;
            if vals.len() != want {
                return Err(Error::Parse(format!(
                    "expected {want} {what} entries, got {}",
                    vals.len()
                )));
            }
            Ok(vals)
        };
        let diag = parse_line(lines.next(), n, "diagonal")?;
        let sub = parse_line(lines.next(), n - 1, "subdiagonal")?;
        Self::new(diag, sub)
    }
}

/// A diagonal orthogonal matrix `E` with entries ±1, recorded as signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parse("sign entries must be +1 or -1".into()));
        }
        Ok(Self { signs })
    }

    pub fn identity(n: usize) -> Self {
        Self { signs: vec![1; n] }
    }

    /// Generator `E_j` (`1 ≤ j < n`): +1 on the first `j` entries, −1 after.
    /// Conjugation by `E_j` flips exactly the `j`-th subdiagonal sign.
    pub fn generator(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j >= n {
            return Err(Error::Parse(format!("generator index {j} out of range 1..{n}")));
        }
        let signs = (0..n).map(|i| if i < j { 1 } else { -1 }).collect();
        Ok(Self { signs })
    }

    /// Entrywise product (the group operation).
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(Self {
            signs: self
                .signs
                .iter()
                .zip(&other.signs)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }
}
