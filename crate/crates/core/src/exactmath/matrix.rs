use super::scalar::{FieldConfig, Scalar};

/// Dense matrix with exact field entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: FieldConfig,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize, field: FieldConfig) -> ExactMatrix {
        ExactMatrix {
            rows,
            cols,
            field,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldConfig) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, field: FieldConfig) -> ExactMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        ExactMatrix { rows: r, cols: c, field, data }
    }

    pub fn from_int_rows(rows: &[&[i64]], field: FieldConfig) -> ExactMatrix {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v, field)).collect())
                .collect(),
            field,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = ExactMatrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x += y.clone();
        }
        out
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&rhs.data) {
            *x -= y.clone();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = x.clone() * c;
        }
        out
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone() + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.field);
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> ExactMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = ExactMatrix::identity(self.rows, self.field);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = Scalar::zero(self.field);
        for i in 0..self.rows {
            t += self.get(i, i).clone();
        }
        t
    }

    /// Reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(row * self.cols + j, p * self.cols + j);
                }
            }
            let inv = self.get(row, col).inv().expect("pivot nonzero");
            for j in col..self.cols {
                let v = self.get(row, j).clone() * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for j in col..self.cols {
                        let v = self.get(r, j).clone() - &(&factor * self.get(row, j));
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Exact basis of the null space.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Scalar::zero(self.field); self.cols];
            v[free] = Scalar::one(self.field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(n, 2 * n, self.field);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one(self.field));
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(k, &p)| p != k) {
            return None;
        }
        let mut inv = ExactMatrix::zeros(n, n, self.field);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// Incremental row-echelon span of vectors of fixed length.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    len: usize,
    field: FieldConfig,
    // rows in echelon form, each paired with its leading column
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl SpanBuilder {
    pub fn new(len: usize, field: FieldConfig) -> SpanBuilder {
        SpanBuilder { len, field, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (lead, row) in &self.rows {
            if !v[*lead].is_zero() {
                let factor = v[*lead].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &factor * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds a vector; returns true when it enlarged the span.
    pub fn add(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut r = self.reduce(v);
        let Some(lead) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[lead].inv().expect("nonzero leading entry");
        for x in r.iter_mut() {
            *x = x.clone() * &inv;
        }
        // back-substitute into earlier rows to keep reduction canonical
        for (_, row) in self.rows.iter_mut() {
            if !row[lead].is_zero() {
                let factor = row[lead].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x -= &factor * y;
                }
            }
        }
        self.rows.push((lead, r));
        self.rows.sort_by_key(|(l, _)| *l);
        true
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Scalar {
        Scalar::from_int(n, FieldConfig::Rational)
    }

    #[test]
    fn kernel_examples() {
        let f = FieldConfig::Rational;
        // [[0,1],[0,0]] → span{(1,0)}
        let m = ExactMatrix::from_int_rows(&[&[0, 1], &[0, 0]], f);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![rat(1), rat(0)]);
        // identity → {}
        assert!(ExactMatrix::identity(2, f).kernel().is_empty());
        // [[1,1],[1,1]] → span{(1,−1)} up to scale
        let m = ExactMatrix::from_int_rows(&[&[1, 1], &[1, 1]], f);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Scalar::is_zero));
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn rank_plus_nullity() {
        let f = FieldConfig::Rational;
        let m = ExactMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]], f);
        assert_eq!(m.rank() + m.kernel().len(), m.cols());
        for v in m.kernel() {
            assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = FieldConfig::Rational;
        let m = ExactMatrix::from_int_rows(&[&[2, 1], &[1, 1]], f);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ExactMatrix::identity(2, f));
        let sing = ExactMatrix::from_int_rows(&[&[1, 2], &[2, 4]], f);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn span_builder_tracks_membership() {
        let f = FieldConfig::Rational;
        let mut s = SpanBuilder::new(3, f);
        assert!(s.add(&[rat(1), rat(2), rat(0)]));
        assert!(s.add(&[rat(0), rat(1), rat(1)]));
        assert!(!s.add(&[rat(1), rat(3), rat(1)]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[rat(2), rat(5), rat(1)]));
        assert!(!s.contains(&[rat(0), rat(0), rat(1)]));
    }
}
