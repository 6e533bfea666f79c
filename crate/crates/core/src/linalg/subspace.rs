use super::field::Field;
use super::matrix::Matrix;
use crate::error::{input_err, Result};

/// A subspace of `F^ambient`, kept as a fully reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    /// Basis rows; row `k` has a one at `pivots[k]` and zeros at every other
    /// pivot position.
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let mut s = Self::zero(field, ambient);
        for i in 0..ambient {
            let mut v = vec![field.zero(); ambient];
            v[i] = field.one();
            s.rows.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn spanned_by<I>(field: &F, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<F::Elem>>,
    {
        let mut s = Self::zero(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis sorted by pivot column: the unique RREF of the subspace.
    pub fn canonical_basis(&self) -> Vec<Vec<F::Elem>> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&k| self.pivots[k]);
        idx.into_iter().map(|k| self.rows[k].clone()).collect()
    }

    /// Reduces `v` against the basis in place; returns the first nonzero
    /// position of the remainder.
    fn reduce(&self, v: &mut [F::Elem]) -> Option<usize> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !self.field.is_zero(&v[p]) {
                let c = self.field.neg(&v[p]);
                self.field.axpy(v, &c, row);
            }
        }
        v.iter().position(|x| !self.field.is_zero(x))
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w).is_none()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let Some(p) = self.reduce(&mut v) else {
            return false;
        };
        let inv = self.field.inv(&v[p]);
        self.field.scale(&mut v, &inv);
        for row in self.rows.iter_mut() {
            if !self.field.is_zero(&row[p]) {
                let c = self.field.neg(&row[p]);
                self.field.axpy(row, &c, &v);
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    /// Coordinates of `v` in the stored basis, or `None` when `v` is not in
    /// the subspace.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let coords: Vec<F::Elem> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (row, c) in self.rows.iter().zip(&coords) {
            if !self.field.is_zero(c) {
                let nc = self.field.neg(c);
                self.field.axpy(&mut w, &nc, row);
            }
        }
        if w.iter().all(|x| self.field.is_zero(x)) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn same_as(&self, other: &Subspace<F>) -> bool {
        self.ambient == other.ambient
            && self.dim() == other.dim()
            && self.canonical_basis() == other.canonical_basis()
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_columns(&self.field, self.ambient, &self.rows)
    }
}

/// Smallest subspace containing `seed` and stable under every operator.
pub fn span_closure<F: Field>(
    field: &F,
    ambient: usize,
    seed: Vec<Vec<F::Elem>>,
    operators: &[&Matrix<F>],
) -> Result<Subspace<F>> {
    for op in operators {
        if op.rows() != ambient || op.cols() != ambient {
            return Err(input_err!(
                "span_closure: operator is {}x{}, ambient dimension is {ambient}",
                op.rows(),
                op.cols()
            ));
        }
    }
    if let Some(v) = seed.iter().find(|v| v.len() != ambient) {
        return Err(input_err!("span_closure: seed vector has length {}", v.len()));
    }
    let mut space = Subspace::zero(field, ambient);
    extend_closure(&mut space, seed, operators.len(), |k, v| operators[k].mul_vec(v));
    Ok(space)
}

/// Grows `space`, assumed stable under the operators already, to the
/// smallest stable subspace also containing `seed`. Operators are given as
/// `apply(k, v)` for `k < count`. Returns whether the dimension grew.
pub fn extend_closure<F: Field>(
    space: &mut Subspace<F>,
    seed: Vec<Vec<F::Elem>>,
    count: usize,
    apply: impl Fn(usize, &[F::Elem]) -> Vec<F::Elem>,
) -> bool {
    let start = space.dim();
    let mut frontier: Vec<Vec<F::Elem>> = seed.into_iter().filter(|v| space.insert(v.clone())).collect();
    while let Some(v) = frontier.pop() {
        if space.dim() == space.ambient() {
            break;
        }
        for k in 0..count {
            let w = apply(k, &v);
            if space.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    space.dim() > start
}

/// A quotient `F^ambient / sub` with a chosen complement.
#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    /// `dim x ambient`, kills `sub`.
    pub projection: Matrix<F>,
    /// `ambient x dim`, `projection * section = id`.
    pub section: Matrix<F>,
    pub dim: usize,
    /// Ambient coordinates used as the quotient basis.
    pub basis_coords: Vec<usize>,
}

impl<F: Field> Quotient<F> {
    /// Image of a single ambient vector.
    pub fn project(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        self.projection.mul_vec(v)
    }
}

/// Quotient by `sub`, with basis the non-pivot coordinates of its RREF.
pub fn quotient_with_section<F: Field>(sub: &Subspace<F>) -> Quotient<F> {
    let f = sub.field();
    let ambient = sub.ambient();
    let mut pivot_row = vec![None; ambient];
    for (k, &p) in sub.pivots().iter().enumerate() {
        pivot_row[p] = Some(k);
    }
    let basis_coords: Vec<usize> = (0..ambient).filter(|&c| pivot_row[c].is_none()).collect();
    let dim = basis_coords.len();
    let mut projection = Matrix::zeros(f, dim, ambient);
    let mut section = Matrix::zeros(f, ambient, dim);
    for (q, &c) in basis_coords.iter().enumerate() {
        projection.set(q, c, f.one());
        section.set(c, q, f.one());
    }
    for (j, row) in pivot_row.iter().enumerate() {
        if let Some(k) = row {
            let basis_row = &sub.basis()[*k];
            for (q, &c) in basis_coords.iter().enumerate() {
                let x = &basis_row[c];
                if !f.is_zero(x) {
                    projection.set(q, j, f.neg(x));
                }
            }
        }
    }
    Quotient { projection, section, dim, basis_coords }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::PrimeField;

    fn fp() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    #[test]
    fn closure_examples() {
        let f = fp();
        let id = Matrix::identity(&f, 2);
        let s = span_closure(&f, 2, vec![vec![1, 0]], &[&id]).unwrap();
        assert_eq!(s.dim(), 1);

        let swap = Matrix::from_rows(&f, 2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        let s = span_closure(&f, 2, vec![vec![1, 0]], &[&swap]).unwrap();
        assert_eq!(s.dim(), 2);

        let s = span_closure(&f, 2, vec![vec![0, 0]], &[&swap]).unwrap();
        assert_eq!(s.dim(), 0);

        assert!(span_closure(&f, 3, vec![], &[&swap]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let f = fp();
        let q = quotient_with_section(&Subspace::zero(&f, 3));
        assert_eq!(q.dim, 3);
        assert_eq!(q.projection, Matrix::identity(&f, 3));

        let q = quotient_with_section(&Subspace::full(&f, 3));
        assert_eq!(q.dim, 0);

        let sub = Subspace::spanned_by(&f, 3, vec![vec![1, 1, 0]]);
        let q = quotient_with_section(&sub);
        assert_eq!(q.dim, 2);
        assert_eq!(q.project(&[1, 1, 0]), vec![0, 0]);
        assert_eq!(q.projection.rank(), 2);
        assert_eq!(q.projection.mul(&q.section).unwrap(), Matrix::identity(&f, 2));
    }

    #[test]
    fn coordinates_and_membership() {
        let f = fp();
        let sub = Subspace::spanned_by(&f, 3, vec![vec![1, 2, 0], vec![0, 1, 1]]);
        assert!(sub.contains(&[1, 3, 1]));
        assert!(!sub.contains(&[0, 0, 1]));
        let v = vec![2, 5, 1];
        let c = sub.coordinates(&v).unwrap();
        let mut rebuilt = vec![0; 3];
        for (row, x) in sub.basis().iter().zip(&c) {
            f.axpy(&mut rebuilt, x, row);
        }
        assert_eq!(rebuilt, v);
    }
}
