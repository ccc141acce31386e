//! Dense exact vectors, square matrices and canonical subspaces.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("field mismatch: expected {expected}, got {got}")]
    Field { expected: Field, got: Field },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square: {rows} rows of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error(transparent)]
    Scalar(#[from] FieldError),
}

/// Coordinates of an element relative to a fixed basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    field: Field,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn zero(field: Field, dim: usize) -> Self {
        Vector {
            field,
            coords: vec![field.zero(); dim],
        }
    }

    /// The `index`-th standard basis vector.
    pub fn unit(field: Field, dim: usize, index: usize) -> Self {
        let mut v = Vector::zero(field, dim);
        v.coords[index] = field.one();
        v
    }

    pub fn new(field: Field, coords: Vec<Scalar>) -> Result<Self, LinalgError> {
        if let Some(bad) = coords.iter().find(|c| c.field() != field) {
            return Err(LinalgError::Field {
                expected: field,
                got: bad.field(),
            });
        }
        Ok(Vector { field, coords })
    }

    /// Builds a vector from small integers.
    pub fn from_ints(field: Field, coords: &[i64]) -> Self {
        Vector {
            field,
            coords: coords.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, index: usize) -> &Scalar {
        &self.coords[index]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    pub fn leading_index(&self) -> Option<usize> {
        self.coords.iter().position(|c| !c.is_zero())
    }

    pub(crate) fn check_compatible(&self, field: Field, dim: usize) -> Result<(), LinalgError> {
        if self.field != field {
            return Err(LinalgError::Field {
                expected: field,
                got: self.field,
            });
        }
        if self.dim() != dim {
            return Err(LinalgError::Dimension {
                expected: dim,
                got: self.dim(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Vector) -> Result<Vector, LinalgError> {
        other.check_compatible(self.field, self.dim())?;
        Ok(self.add(other))
    }

    pub fn add(&self, other: &Vector) -> Vector {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Vector {
            field: self.field,
            coords,
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Vector {
            field: self.field,
            coords,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: &Scalar, other: &Vector) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a = &*a + &(s * b);
            }
        }
    }

    /// Rescales so the leading coordinate is one; zero stays zero.
    pub fn normalized(&self) -> Vector {
        match self.leading_index() {
            Some(i) if !self.coords[i].is_one() => {
                let inv = self.coords[i].inverse().expect("leading coordinate is nonzero");
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Keeps the coordinates in `indices`, zeroing the rest.
    pub fn project(&self, indices: &[usize]) -> Result<Vector, LinalgError> {
        let mut out = Vector::zero(self.field, self.dim());
        for &i in indices {
            if i >= self.dim() {
                return Err(LinalgError::IndexOutOfRange {
                    index: i,
                    dim: self.dim(),
                });
            }
            out.coords[i] = self.coords[i].clone();
        }
        Ok(out)
    }

    pub fn set(&mut self, index: usize, value: Scalar) {
        self.coords[index] = value;
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A square matrix given by its rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: Vec<Vector>,
}

impl Matrix {
    pub fn from_rows(field: Field, rows: Vec<Vector>) -> Result<Self, LinalgError> {
        let n = rows.len();
        for r in &rows {
            if r.dim() != n {
                return Err(LinalgError::NotSquare { rows: n, cols: r.dim() });
            }
            r.check_compatible(field, n)?;
        }
        Ok(Matrix { field, rows })
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Matrix {
            field,
            rows: (0..n).map(|i| Vector::unit(field, n, i)).collect(),
        }
    }

    pub fn diagonal(field: Field, entries: &[Scalar]) -> Self {
        let n = entries.len();
        let rows = entries
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut v = Vector::zero(field, n);
                v.set(i, s.clone());
                v
            })
            .collect();
        Matrix { field, rows }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vector> {
        self.rows
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        self.rows[row].coord(col)
    }

    /// Row vector times matrix: `Σ_i v_i * row_i`.
    pub fn left_apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.field, self.size());
        for (vi, row) in v.coords().iter().zip(&self.rows) {
            out.add_scaled(vi, row);
        }
        out
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        let n = self.size();
        let field = self.field;
        let mut a: Vec<Vector> = self.rows.clone();
        let mut inv: Vec<Vector> = Matrix::identity(field, n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r].coord(col).is_zero())
                .ok_or(LinalgError::Singular)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let s = a[col].coord(col).inverse()?;
            a[col] = a[col].scale(&s);
            inv[col] = inv[col].scale(&s);
            for r in 0..n {
                if r != col && !a[r].coord(col).is_zero() {
                    let factor = -a[r].coord(col);
                    let (pa, pi) = (a[col].clone(), inv[col].clone());
                    a[r].add_scaled(&factor, &pa);
                    inv[r].add_scaled(&factor, &pi);
                }
            }
        }
        Ok(Matrix { field, rows: inv })
    }

    pub fn is_invertible(&self) -> bool {
        Subspace::span_unchecked(self.field, self.size(), self.rows.iter().cloned()).rank() == self.size()
    }
}

/// A subspace in reduced row-echelon form.
///
/// Rows have a leading one at each pivot column and zeros in every other
/// pivot column, so two subspaces are equal iff their stored forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    field: Field,
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, dim: usize) -> Self {
        Subspace {
            field,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, dim: usize) -> Self {
        Subspace {
            field,
            dim,
            rows: (0..dim).map(|i| Vector::unit(field, dim, i)).collect(),
            pivots: (0..dim).collect(),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(field: Field, dim: usize, indices: &[usize]) -> Result<Self, LinalgError> {
        let mut vs = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= dim {
                return Err(LinalgError::IndexOutOfRange { index: i, dim });
            }
            vs.push(Vector::unit(field, dim, i));
        }
        Ok(Subspace::span_unchecked(field, dim, vs))
    }

    pub fn span<'a, I>(field: Field, dim: usize, vs: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let mut rows = Vec::new();
        for v in vs {
            v.check_compatible(field, dim)?;
            rows.push(v.clone());
        }
        Ok(Subspace::span_unchecked(field, dim, rows))
    }

    pub(crate) fn span_unchecked<I>(field: Field, dim: usize, vs: I) -> Self
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut s = Subspace::zero(field, dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    /// Adjoins `v`, keeping reduced echelon form. Returns whether the rank grew.
    pub(crate) fn insert(&mut self, v: Vector) -> bool {
        let r = self.reduce(&v);
        let Some(lead) = r.leading_index() else {
            return false;
        };
        let r = r.normalized();
        for row in &mut self.rows {
            let c = row.coord(lead).clone();
            if !c.is_zero() {
                row.add_scaled(&-&c, &r);
            }
        }
        let at = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(at, lead);
        self.rows.insert(at, r);
        true
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = r.coord(p).clone();
            if !c.is_zero() {
                r.add_scaled(&-&c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> Result<bool, LinalgError> {
        v.check_compatible(self.field, self.dim)?;
        Ok(self.reduce(v).is_zero())
    }

    pub(crate) fn contains_unchecked(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v.clone());
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains_unchecked(r))
    }

    /// `{x : r·x = 0 for every row r}` under the standard pairing.
    pub fn orthogonal(&self) -> Subspace {
        nullspace(self.field, self.dim, &self.rows)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let mut eqs = self.orthogonal().rows;
        eqs.extend(other.orthogonal().rows);
        nullspace(self.field, self.dim, &eqs)
    }

    /// Coordinates of `v` relative to the echelon rows, if `v` lies in the subspace.
    pub fn coordinates_of(&self, v: &Vector) -> Option<Vec<Scalar>> {
        if !self.contains_unchecked(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v.coord(p).clone()).collect())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// Solutions `x` of `e·x = 0` for every equation row `e`.
pub fn nullspace(field: Field, dim: usize, equations: &[Vector]) -> Subspace {
    let reduced = Subspace::span_unchecked(field, dim, equations.iter().cloned());
    let free: Vec<usize> = (0..dim).filter(|c| !reduced.pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = Vector::unit(field, dim, f);
        for (row, &p) in reduced.rows.iter().zip(&reduced.pivots) {
            x.set(p, -row.coord(f));
        }
        basis.push(x);
    }
    Subspace::span_unchecked(field, dim, basis)
}
