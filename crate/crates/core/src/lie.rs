//! Lie algebras by structure constants, modules, and Chevalley–Eilenberg
//! cochains.

use crate::error::{Error, Result};
use crate::field::{quotient_basis, FpMatrix, FpVector, PrimeField};
use crate::tuples;

/// Finite-dimensional Lie algebra over `F_p` with a fixed ordered basis.
///
/// `table[(i * n + j) * n + k]` is the coefficient of `e_k` in `[e_i, e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    field: PrimeField,
    labels: Vec<String>,
    table: Vec<u32>,
}

impl LieAlgebra {
    /// Builds an algebra from brackets of basis pairs `(i, j, [e_i, e_j])`.
    /// Unlisted pairs bracket to zero and `[e_j, e_i]` is filled in.
    pub fn from_brackets(
        field: PrimeField,
        labels: Vec<String>,
        brackets: &[(usize, usize, FpVector)],
    ) -> Result<Self> {
        let table = bracket_table(field, labels.len(), brackets)?;
        Self::from_table(field, labels, table)
    }

    pub fn from_table(field: PrimeField, labels: Vec<String>, table: Vec<u32>) -> Result<Self> {
        let alg = Self::from_table_unchecked(field, labels, table)?;
        alg.check_antisymmetry()?;
        if let Some((i, j, k)) = jacobi_check(&alg) {
            return Err(Error::JacobiViolated(i, j, k));
        }
        Ok(alg)
    }

    /// Skips the antisymmetry and Jacobi checks. Used for brackets that are
    /// only bilinear maps, such as deformation coefficients.
    pub fn from_table_unchecked(field: PrimeField, labels: Vec<String>, table: Vec<u32>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                context: "structure constants",
                expected: n * n * n,
                found: table.len(),
            });
        }
        Ok(Self { field, labels, table })
    }

    pub fn abelian(field: PrimeField, labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            field,
            labels,
            table: vec![0; n * n * n],
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    fn check_antisymmetry(&self) -> Result<()> {
        let n = self.dim();
        let f = self.field;
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let a = self.coeff(i, j, k);
                    let b = self.coeff(j, i, k);
                    if f.add(a, b) != 0 || (i == j && a != 0) {
                        return Err(Error::NotAntisymmetric(i, j));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> u32 {
        let n = self.dim();
        self.table[(i * n + j) * n + k]
    }

    pub fn basis(&self, i: usize) -> FpVector {
        FpVector::basis(self.field, self.dim(), i)
    }

    pub fn zero(&self) -> FpVector {
        FpVector::zero(self.field, self.dim())
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> FpVector {
        let n = self.dim();
        FpVector::from_raw(self.field, self.table[(i * n + j) * n..(i * n + j + 1) * n].to_vec())
    }

    pub fn bracket(&self, a: &FpVector, b: &FpVector) -> FpVector {
        let n = self.dim();
        let f = self.field;
        let mut out = vec![0u32; n];
        for (i, ai) in a.support() {
            for (j, bj) in b.support() {
                let c = f.mul(ai, bj);
                let row = &self.table[(i * n + j) * n..(i * n + j + 1) * n];
                for (o, &t) in out.iter_mut().zip(row) {
                    if t != 0 {
                        *o = f.add(*o, f.mul(c, t));
                    }
                }
            }
        }
        FpVector::from_raw(f, out)
    }

    /// Left-nested bracket `[..[[x1, x2], x3], .., xk]`.
    pub fn iterated_bracket(&self, xs: &[FpVector]) -> FpVector {
        let mut it = xs.iter();
        let mut acc = it.next().cloned().unwrap_or_else(|| self.zero());
        for x in it {
            acc = self.bracket(&acc, x);
        }
        acc
    }

    /// Matrix of `ad x`; column `j` holds `[x, e_j]`.
    pub fn ad(&self, x: &FpVector) -> FpMatrix {
        let cols: Vec<FpVector> = (0..self.dim()).map(|j| self.bracket(x, &self.basis(j))).collect();
        FpMatrix::from_columns(self.field, self.dim(), &cols)
    }
}

/// Dense bracket table from a sparse list, rejecting conflicting entries.
pub fn bracket_table(
    field: PrimeField,
    n: usize,
    brackets: &[(usize, usize, FpVector)],
) -> Result<Vec<u32>> {
    let mut table = vec![0u32; n * n * n];
    let mut seen = vec![false; n * n];
    for (i, j, v) in brackets {
        let (i, j) = (*i, *j);
        if i >= n || j >= n {
            return Err(Error::DimensionMismatch {
                context: "bracket index",
                expected: n,
                found: i.max(j),
            });
        }
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                context: "bracket value",
                expected: n,
                found: v.len(),
            });
        }
        if i == j {
            if !v.is_zero() {
                return Err(Error::NotAntisymmetric(i, j));
            }
            continue;
        }
        let neg = v.scaled(field.neg(1));
        for (a, b, w) in [(i, j, v), (j, i, &neg)] {
            let slot = &mut table[(a * n + b) * n..(a * n + b + 1) * n];
            if seen[a * n + b] && slot != w.raw() {
                return Err(Error::NotAntisymmetric(i, j));
            }
            slot.copy_from_slice(w.raw());
            seen[a * n + b] = true;
        }
    }
    Ok(table)
}

/// First basis triple `i < j < k` on which the Jacobi sum is nonzero.
pub fn jacobi_check(alg: &LieAlgebra) -> Option<(usize, usize, usize)> {
    let n = alg.dim();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (alg.basis(i), alg.basis(j), alg.basis(k));
                let mut s = alg.bracket(&x, &alg.bracket(&y, &z));
                s.add_assign(&alg.bracket(&y, &alg.bracket(&z, &x)));
                s.add_assign(&alg.bracket(&z, &alg.bracket(&x, &y)));
                if !s.is_zero() {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Left module given by one action matrix per basis element of the algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LModule {
    dim: usize,
    action: Vec<FpMatrix>,
}

impl LModule {
    pub fn new(alg: &LieAlgebra, dim: usize, action: Vec<FpMatrix>) -> Result<Self> {
        let m = Self::new_unchecked(alg, dim, action)?;
        let n = alg.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = m.action_of(&alg.bracket_basis(i, j));
                let a = m.action[i].mul(&m.action[j])?;
                let b = m.action[j].mul(&m.action[i])?;
                let rhs = a.add(&b.scaled(alg.field().neg(1)));
                if lhs != rhs {
                    return Err(Error::NotRepresentation(i, j));
                }
            }
        }
        Ok(m)
    }

    pub fn new_unchecked(alg: &LieAlgebra, dim: usize, action: Vec<FpMatrix>) -> Result<Self> {
        if action.len() != alg.dim() {
            return Err(Error::DimensionMismatch {
                context: "module action count",
                expected: alg.dim(),
                found: action.len(),
            });
        }
        for a in &action {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "module action matrix",
                    expected: dim,
                    found: a.rows().max(a.cols()),
                });
            }
        }
        Ok(Self { dim, action })
    }

    pub fn adjoint(alg: &LieAlgebra) -> Self {
        Self {
            dim: alg.dim(),
            action: (0..alg.dim()).map(|i| alg.ad(&alg.basis(i))).collect(),
        }
    }

    pub fn trivial(alg: &LieAlgebra) -> Self {
        Self {
            dim: 1,
            action: (0..alg.dim()).map(|_| FpMatrix::zeros(alg.field(), 1, 1)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[FpMatrix] {
        &self.action
    }

    /// Matrix of `x ·` for an arbitrary algebra element.
    pub fn action_of(&self, x: &FpVector) -> FpMatrix {
        let f = x.field();
        let mut acc = FpMatrix::zeros(f, self.dim, self.dim);
        for (i, c) in x.support() {
            acc = acc.add(&self.action[i].scaled(c));
        }
        acc
    }

    pub fn act(&self, x: &FpVector, v: &FpVector) -> FpVector {
        let mut out = FpVector::zero(v.field(), self.dim);
        for (i, c) in x.support() {
            out.axpy(c, &self.action[i].mul_vec(v));
        }
        out
    }

    /// `x · (x · (... v))` with `k` applications.
    pub fn act_power(&self, x: &FpVector, k: usize, v: &FpVector) -> FpVector {
        let a = self.action_of(x);
        let mut out = v.clone();
        for _ in 0..k {
            out = a.mul_vec(&out);
        }
        out
    }
}

/// Alternating q-linear map from the algebra (dimension `n`) to a module
/// (dimension `m`), stored by its values on increasing basis tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CeCochain {
    field: PrimeField,
    n: usize,
    m: usize,
    degree: usize,
    values: Vec<u32>,
}

impl CeCochain {
    pub fn zero(field: PrimeField, n: usize, m: usize, degree: usize) -> Self {
        Self {
            field,
            n,
            m,
            degree,
            values: vec![0; tuples::binom(n, degree) * m],
        }
    }

    pub fn coord_len(n: usize, m: usize, degree: usize) -> usize {
        tuples::binom(n, degree) * m
    }

    pub fn from_coords(n: usize, m: usize, degree: usize, coords: &FpVector) -> Result<Self> {
        let len = Self::coord_len(n, m, degree);
        if coords.len() != len {
            return Err(Error::DimensionMismatch {
                context: "cochain coordinates",
                expected: len,
                found: coords.len(),
            });
        }
        Ok(Self {
            field: coords.field(),
            n,
            m,
            degree,
            values: coords.raw().to_vec(),
        })
    }

    pub fn coords(&self) -> FpVector {
        FpVector::from_raw(self.field, self.values.clone())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn alg_dim(&self) -> usize {
        self.n
    }

    pub fn module_dim(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Value on an increasing tuple.
    pub fn value(&self, tuple: &[usize]) -> FpVector {
        let r = tuples::rank(tuple);
        FpVector::from_raw(self.field, self.values[r * self.m..(r + 1) * self.m].to_vec())
    }

    pub fn set_value(&mut self, tuple: &[usize], v: &FpVector) {
        let mut t = tuple.to_vec();
        let parity = tuples::sort_with_parity(&mut t).expect("distinct indices");
        let v = if parity == 1 { v.scaled(self.field.neg(1)) } else { v.clone() };
        let r = tuples::rank(&t);
        self.values[r * self.m..(r + 1) * self.m].copy_from_slice(v.raw());
    }

    /// Accumulates `c * φ(e_{idx})` into `out`, handling order and repeats.
    pub fn add_basis_value(&self, idx: &[usize], c: u32, out: &mut FpVector) {
        if c == 0 {
            return;
        }
        let mut t = idx.to_vec();
        let Some(parity) = tuples::sort_with_parity(&mut t) else {
            return;
        };
        let c = if parity == 1 { self.field.neg(c) } else { c };
        let r = tuples::rank(&t);
        let f = self.field;
        let slot = &self.values[r * self.m..(r + 1) * self.m];
        for (o, &s) in out.raw_mut().iter_mut().zip(slot) {
            if s != 0 {
                *o = f.add(*o, f.mul(c, s));
            }
        }
    }

    pub fn eval_basis(&self, idx: &[usize]) -> FpVector {
        let mut out = FpVector::zero(self.field, self.m);
        self.add_basis_value(idx, 1, &mut out);
        out
    }

    /// Multilinear evaluation on arbitrary algebra elements.
    pub fn eval(&self, args: &[&FpVector]) -> FpVector {
        assert_eq!(args.len(), self.degree, "cochain arity");
        let mut out = FpVector::zero(self.field, self.m);
        let mut idx = Vec::with_capacity(self.degree);
        self.eval_rec(args, 1 % self.field.p(), &mut idx, &mut out);
        out
    }

    fn eval_rec(&self, args: &[&FpVector], c: u32, idx: &mut Vec<usize>, out: &mut FpVector) {
        let k = idx.len();
        if k == args.len() {
            self.add_basis_value(idx, c, out);
            return;
        }
        for (i, a) in args[k].support() {
            if idx.contains(&i) {
                continue;
            }
            idx.push(i);
            self.eval_rec(args, self.field.mul(c, a), idx, out);
            idx.pop();
        }
    }

    /// Postcomposition with a linear map on values.
    pub fn map_values(&self, f: &FpMatrix) -> CeCochain {
        let m2 = f.rows();
        let mut out = CeCochain::zero(self.field, self.n, m2, self.degree);
        let count = tuples::binom(self.n, self.degree);
        for r in 0..count {
            let v = FpVector::from_raw(self.field, self.values[r * self.m..(r + 1) * self.m].to_vec());
            let w = f.mul_vec(&v);
            out.values[r * m2..(r + 1) * m2].copy_from_slice(w.raw());
        }
        out
    }

    /// Precomposition with a linear map `g` between algebras, `g` having
    /// columns indexed by the new algebra's basis.
    pub fn pullback(&self, g: &FpMatrix) -> CeCochain {
        let n2 = g.cols();
        let mut out = CeCochain::zero(self.field, n2, self.m, self.degree);
        let cols: Vec<FpVector> = (0..n2).map(|j| g.column(j)).collect();
        for (r, t) in tuples::all(n2, self.degree).iter().enumerate() {
            let args: Vec<&FpVector> = t.iter().map(|&j| &cols[j]).collect();
            let v = self.eval(&args);
            out.values[r * self.m..(r + 1) * self.m].copy_from_slice(v.raw());
        }
        out
    }

    pub fn add(&self, other: &CeCochain) -> CeCochain {
        let mut c = self.coords();
        c.add_assign(&other.coords());
        CeCochain { values: c.into_raw(), ..self.clone() }
    }

    pub fn scaled(&self, s: u32) -> CeCochain {
        CeCochain {
            values: self.coords().scaled(s).into_raw(),
            ..self.clone()
        }
    }
}

/// Bracket of the algebra viewed as an adjoint-valued 2-cochain.
pub fn bracket_cochain(alg: &LieAlgebra) -> CeCochain {
    let n = alg.dim();
    let mut c = CeCochain::zero(alg.field(), n, n, 2);
    for t in tuples::all(n, 2) {
        c.set_value(&t, &alg.bracket_basis(t[0], t[1]));
    }
    c
}

/// Chevalley–Eilenberg differential of a q-cochain, evaluated on increasing
/// (q+1)-tuples.
pub fn ce_differential(alg: &LieAlgebra, module: &LModule, phi: &CeCochain) -> CeCochain {
    let f = alg.field();
    let n = alg.dim();
    let q = phi.degree();
    let mut out = CeCochain::zero(f, n, module.dim(), q + 1);
    for (r, t) in tuples::all(n, q + 1).iter().enumerate() {
        let v = ce_differential_at(alg, module, phi, t);
        out.values[r * module.dim()..(r + 1) * module.dim()].copy_from_slice(v.raw());
    }
    out
}

/// `dφ(e_{t_0}, ..., e_{t_q})` for basis indices.
pub fn ce_differential_at(alg: &LieAlgebra, module: &LModule, phi: &CeCochain, t: &[usize]) -> FpVector {
    let f = alg.field();
    let q1 = t.len();
    let mut acc = FpVector::zero(f, module.dim());
    let mut rest = Vec::with_capacity(q1);
    for s in 0..q1 {
        for u in s + 1..q1 {
            let br = alg.bracket_basis(t[s], t[u]);
            let sign = f.sign(s + u);
            for (k, c) in br.support() {
                rest.clear();
                rest.push(k);
                rest.extend(t.iter().enumerate().filter(|&(i, _)| i != s && i != u).map(|(_, &x)| x));
                phi.add_basis_value(&rest, f.mul(sign, c), &mut acc);
            }
        }
    }
    for s in 0..q1 {
        rest.clear();
        rest.extend(t.iter().enumerate().filter(|&(i, _)| i != s).map(|(_, &x)| x));
        let v = phi.eval_basis(&rest);
        if !v.is_zero() {
            let w = module.action()[t[s]].mul_vec(&v);
            acc.axpy(f.sign(s), &w);
        }
    }
    acc
}

/// Matrix of a linear map given column by column on unit coordinate vectors.
pub fn matrix_of(field: PrimeField, dim_in: usize, dim_out: usize, mut apply: impl FnMut(&FpVector) -> FpVector) -> FpMatrix {
    let cols: Vec<FpVector> = (0..dim_in)
        .map(|j| {
            let v = apply(&FpVector::basis(field, dim_in, j));
            assert_eq!(v.len(), dim_out, "image length");
            v
        })
        .collect();
    FpMatrix::from_columns(field, dim_out, &cols)
}

pub fn ce_differential_matrix(alg: &LieAlgebra, module: &LModule, q: usize) -> FpMatrix {
    let n = alg.dim();
    let m = module.dim();
    matrix_of(
        alg.field(),
        CeCochain::coord_len(n, m, q),
        CeCochain::coord_len(n, m, q + 1),
        |u| {
            let phi = CeCochain::from_coords(n, m, q, u).expect("coords");
            ce_differential(alg, module, &phi).coords()
        },
    )
}

/// Dimensions and representatives of a cohomology group computed from a
/// pair of differentials `d_in: C^{q-1} -> C^q` and `d_out: C^q -> C^{q+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyResult {
    pub degree: usize,
    pub cochain_dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub dim: usize,
    /// Coordinates of cocycles whose classes form a basis.
    pub basis: Vec<FpVector>,
    /// A basis of the cocycle space.
    pub cocycles: Vec<FpVector>,
    /// A spanning set of the coboundary space.
    pub coboundaries: Vec<FpVector>,
}

pub fn cohomology_from_differentials(
    field: PrimeField,
    degree: usize,
    cochain_dim: usize,
    d_in: Option<&FpMatrix>,
    d_out: Option<&FpMatrix>,
) -> Result<CohomologyResult> {
    let cocycles = match d_out {
        Some(d) if d.rows() > 0 => d.kernel_basis(),
        _ => (0..cochain_dim).map(|i| FpVector::basis(field, cochain_dim, i)).collect(),
    };
    let coboundaries: Vec<FpVector> = match d_in {
        Some(d) => (0..d.cols()).map(|j| d.column(j)).filter(|c| !c.is_zero()).collect(),
        None => Vec::new(),
    };
    let basis = quotient_basis(field, cochain_dim, &cocycles, &coboundaries)?;
    let coboundary_dim = crate::field::span_rank(field, cochain_dim, &coboundaries);
    Ok(CohomologyResult {
        degree,
        cochain_dim,
        cocycle_dim: cocycles.len(),
        coboundary_dim,
        dim: basis.len(),
        basis,
        cocycles,
        coboundaries,
    })
}

pub fn ce_cohomology(alg: &LieAlgebra, module: &LModule, q: usize) -> Result<CohomologyResult> {
    let n = alg.dim();
    let m = module.dim();
    let d_out = ce_differential_matrix(alg, module, q);
    let d_in = (q > 0).then(|| ce_differential_matrix(alg, module, q - 1));
    cohomology_from_differentials(alg.field(), q, CeCochain::coord_len(n, m, q), d_in.as_ref(), Some(&d_out))
}
