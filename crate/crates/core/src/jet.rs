//! Algebras over the truncated ring `R = F_p[t] / (t^{N+1})`.
//!
//! An element of `L ⊗ R` is a list of `N + 1` coefficient vectors. A bracket
//! over `R` is given by bilinear tables `m_0, m_1, ...` with
//! `[a, b]_t = Σ t^{i+j+k} m_k(a_i, b_j)`, and a p-map by basis values
//! `ω_t(e_j) = Σ t^k ω_k(e_j)`. The p-map of an arbitrary element follows
//! the same fold as over `F_p`; scalars `λ(t)` pick up the Frobenius of `R`,
//! `λ(t)^p = λ(t^p)`.

use crate::field::{FpMatrix, FpVector, PrimeField};
use crate::lie::{CeCochain, LieAlgebra};
use crate::restricted::{right_ad_power, s_terms, BracketOps};
use crate::tuples;

pub type Series = Vec<FpVector>;

#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    field: PrimeField,
    n: usize,
    order: usize,
    /// `tables[k]` is the bracket coefficient `m_k` as a dense `n^3` table.
    tables: Vec<Vec<u32>>,
    /// `pmaps[k][j]` is `ω_k(e_j)`.
    pmaps: Vec<Vec<FpVector>>,
}

/// Dense table of an adjoint-valued alternating 2-cochain.
pub fn table_of(c: &CeCochain) -> Vec<u32> {
    let n = c.alg_dim();
    let f = c.field();
    let mut t = vec![0u32; n * n * n];
    for pair in tuples::all(n, 2) {
        let v = c.value(&pair);
        let (i, j) = (pair[0], pair[1]);
        for k in 0..n {
            t[(i * n + j) * n + k] = v.raw()[k];
            t[(j * n + i) * n + k] = f.neg(v.raw()[k]);
        }
    }
    t
}

impl TruncatedAlgebra {
    /// `brackets[k]` and `pmaps[k]` give the degree-k coefficients; missing
    /// degrees up to `order` are zero.
    pub fn new(field: PrimeField, n: usize, order: usize, tables: Vec<Vec<u32>>, pmaps: Vec<Vec<FpVector>>) -> Self {
        let mut tables = tables;
        let mut pmaps = pmaps;
        tables.truncate(order + 1);
        pmaps.truncate(order + 1);
        Self {
            field,
            n,
            order,
            tables,
            pmaps,
        }
    }

    pub fn from_parts(base: &LieAlgebra, base_pmap: &[FpVector], brackets: &[CeCochain], pmaps: &[Vec<FpVector>], order: usize) -> Self {
        let mut tables = vec![base.table().to_vec()];
        tables.extend(brackets.iter().map(table_of));
        let mut pm = vec![base_pmap.to_vec()];
        pm.extend(pmaps.iter().cloned());
        Self::new(base.field(), base.dim(), order, tables, pm)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> Series {
        vec![FpVector::zero(self.field, self.n); self.order + 1]
    }

    /// Constant series `v`.
    pub fn constant(&self, v: &FpVector) -> Series {
        let mut s = self.zero();
        s[0] = v.clone();
        s
    }

    /// `t^k v`.
    pub fn monomial(&self, k: usize, v: &FpVector) -> Series {
        let mut s = self.zero();
        if k <= self.order {
            s[k] = v.clone();
        }
        s
    }

    pub fn basis(&self, i: usize) -> Series {
        self.constant(&FpVector::basis(self.field, self.n, i))
    }

    fn apply_table(&self, table: &[u32], a: &FpVector, b: &FpVector, c: u32, out: &mut FpVector) {
        let n = self.n;
        let f = self.field;
        for (i, ai) in a.support() {
            for (j, bj) in b.support() {
                let coef = f.mul(c, f.mul(ai, bj));
                let row = &table[(i * n + j) * n..(i * n + j + 1) * n];
                for (o, &t) in out.raw_mut().iter_mut().zip(row) {
                    if t != 0 {
                        *o = f.add(*o, f.mul(coef, t));
                    }
                }
            }
        }
    }

    /// Multiplication of a series by a scalar series `λ(t)`.
    pub fn scale(&self, lambda: &[u32], v: &Series) -> Series {
        let mut out = self.zero();
        for (i, &l) in lambda.iter().enumerate() {
            if l == 0 {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if i + j > self.order {
                    break;
                }
                out[i + j].axpy(l, vj);
            }
        }
        out
    }

    pub fn frobenius(&self, lambda: &[u32]) -> Vec<u32> {
        let p = self.field.p() as usize;
        let mut out = vec![0u32; self.order + 1];
        for (k, &l) in lambda.iter().enumerate() {
            if k * p <= self.order {
                out[k * p] = l;
            } else if l != 0 {
                break;
            }
        }
        out
    }

    /// p-map of an arbitrary series.
    pub fn pmap(&self, v: &Series) -> Series {
        let n = self.n;
        let mut acc = self.zero();
        let mut prefix = self.zero();
        let mut started = false;
        for j in 0..n {
            let lambda: Vec<u32> = v.iter().map(|c| c.raw()[j]).collect();
            if lambda.iter().all(|&l| l == 0) {
                continue;
            }
            let mut term = self.zero();
            for (k, &l) in lambda.iter().enumerate() {
                term[k].raw_mut()[j] = l;
            }
            if started {
                let s = s_terms(self, &prefix, &term);
                add_series(&mut acc, &s);
            }
            let image: Series = (0..=self.order)
                .map(|k| self.pmaps.get(k).map_or_else(|| FpVector::zero(self.field, n), |pm| pm[j].clone()))
                .collect();
            let fr = self.frobenius(&lambda);
            add_series(&mut acc, &self.scale(&fr, &image));
            add_series(&mut prefix, &term);
            started = true;
        }
        acc
    }

    /// `ω_t(e_j)` as a series.
    pub fn pmap_basis(&self, j: usize) -> Series {
        (0..=self.order)
            .map(|k| self.pmaps.get(k).map_or_else(|| FpVector::zero(self.field, self.n), |pm| pm[j].clone()))
            .collect()
    }

    /// Jacobi sum on a basis triple.
    pub fn jacobi(&self, i: usize, j: usize, k: usize) -> Series {
        let (x, y, z) = (self.basis(i), self.basis(j), self.basis(k));
        let mut s = self.bracket(&x, &self.bracket(&y, &z));
        add_series(&mut s, &self.bracket(&y, &self.bracket(&z, &x)));
        add_series(&mut s, &self.bracket(&z, &self.bracket(&x, &y)));
        s
    }

    /// `[x, ω_t(y)] - [x, y, ..., y]` on basis elements.
    pub fn pmap_defect(&self, i: usize, j: usize) -> Series {
        let (x, y) = (self.basis(i), self.basis(j));
        let mut lhs = self.bracket(&x, &self.pmap_basis(j));
        let rhs = right_ad_power(self, &x, &y, self.field.p() as usize);
        sub_series(&mut lhs, &rhs);
        lhs
    }
}

impl BracketOps for TruncatedAlgebra {
    type Elem = Series;

    fn field(&self) -> PrimeField {
        self.field
    }

    fn zero_like(&self, _x: &Series) -> Series {
        self.zero()
    }

    fn bracket(&self, a: &Series, b: &Series) -> Series {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if i + j > self.order {
                    break;
                }
                if bj.is_zero() {
                    continue;
                }
                for (k, table) in self.tables.iter().enumerate() {
                    let d = i + j + k;
                    if d > self.order {
                        break;
                    }
                    self.apply_table(table, ai, bj, 1, &mut out[d]);
                }
            }
        }
        out
    }

    fn axpy(&self, acc: &mut Series, c: u32, x: &Series) {
        for (a, b) in acc.iter_mut().zip(x) {
            a.axpy(c, b);
        }
    }
}

pub fn add_series(acc: &mut Series, other: &Series) {
    for (a, b) in acc.iter_mut().zip(other) {
        a.add_assign(b);
    }
}

pub fn sub_series(acc: &mut Series, other: &Series) {
    for (a, b) in acc.iter_mut().zip(other) {
        a.sub_assign(b);
    }
}

/// Applies a jet of linear maps `Σ t^i φ_i` to a series.
pub fn apply_jet(maps: &[FpMatrix], v: &Series, order: usize) -> Series {
    let f = v[0].field();
    let rows = maps[0].rows();
    let mut out = vec![FpVector::zero(f, rows); order + 1];
    for (i, m) in maps.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            if i + j > order {
                break;
            }
            out[i + j].add_assign(&m.mul_vec(vj));
        }
    }
    out
}

/// First degree at which a series is nonzero.
pub fn leading_degree(s: &Series) -> Option<usize> {
    s.iter().position(|v| !v.is_zero())
}
