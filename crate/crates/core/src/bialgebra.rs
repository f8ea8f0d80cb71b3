//! Lie bialgebras from exact structure constants.
//!
//! `c[i][j][k] = c^k_{ij}` with `[e_i, e_j] = Σ_k c^k_{ij} e_k`, and
//! `d[i][j][k] = d^{jk}_i` with `δ(e_i) = Σ_{j<k} d^{jk}_i e_j∧e_k`. Both tables
//! are stored dense and antisymmetric in the last two indices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Table = Vec<Vec<Vec<Rational>>>;

fn zero_table(n: usize) -> Table {
    vec![vec![vec![Rational::ZERO; n]; n]; n]
}

/// Fills `t[a][b][c] = v`, `t[a][c][b] = -v`; conflicting entries are rejected.
fn set_antisym(t: &mut Table, a: usize, b: usize, c: usize, v: Rational, what: &str) -> Result<()> {
    let n = t.len();
    if a >= n || b >= n || c >= n {
        return Err(Error::Invalid(format!("{what} index out of range")));
    }
    if b == c {
        if v.is_zero() {
            return Ok(());
        }
        return Err(Error::Invalid(format!(
            "{what} entry on a diagonal pair must vanish"
        )));
    }
    let existing = t[a][b][c];
    if !existing.is_zero() && existing != v {
        return Err(Error::Invalid(format!(
            "{what} entry given twice with different values"
        )));
    }
    t[a][b][c] = v;
    t[a][c][b] = v.neg()?;
    Ok(())
}

fn check_antisym(t: &Table, n: usize, what: &str) -> Result<()> {
    if t.len() != n
        || t.iter()
            .any(|m| m.len() != n || m.iter().any(|r| r.len() != n))
    {
        return Err(Error::Invalid(format!("{what} table has the wrong shape")));
    }
    for m in t {
        for b in 0..n {
            for c in 0..n {
                if m[b][c] != m[c][b].neg()? {
                    return Err(Error::Invalid(format!("{what} table is not antisymmetric")));
                }
            }
        }
    }
    Ok(())
}

/// Toggles a trailing `*` on a basis name.
pub fn dual_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result")]
pub enum SCCheck {
    Pass,
    /// Jacobi sum for `(i, j, k)` has nonzero `e_l` component `value`.
    Fail {
        witness: [usize; 4],
        value: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result")]
pub enum CocycleCheck {
    Pass,
    /// Defect `δ([e_i,e_j]) − ad_{e_i}δ(e_j) + ad_{e_j}δ(e_i)` has nonzero `(a, b)` entry.
    Fail {
        pair: [usize; 2],
        entry: [usize; 2],
        value: String,
    },
}

impl SCCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SCCheck::Pass)
    }
}

impl CocycleCheck {
    pub fn passed(&self) -> bool {
        matches!(self, CocycleCheck::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSC {
    basis: Vec<String>,
    c: Table,
}

impl LieAlgebraSC {
    pub fn abelian<S: AsRef<str>>(basis: &[S]) -> Self {
        let basis: Vec<String> = basis.iter().map(|s| s.as_ref().to_string()).collect();
        let n = basis.len();
        LieAlgebraSC {
            basis,
            c: zero_table(n),
        }
    }

    /// From entries `(i, j, k, c^k_{ij})`; the `(j, i)` entries follow by antisymmetry.
    pub fn new<S: AsRef<str>>(
        basis: &[S],
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        let mut alg = Self::abelian(basis);
        let mut by_pair = zero_table(alg.dim());
        for &(i, j, k, v) in entries {
            set_antisym(&mut by_pair, k, i, j, v, "bracket")?;
        }
        for k in 0..alg.dim() {
            for i in 0..alg.dim() {
                for j in 0..alg.dim() {
                    alg.c[i][j][k] = by_pair[k][i][j];
                }
            }
        }
        Ok(alg)
    }

    pub fn from_table<S: AsRef<str>>(basis: &[S], c: Table) -> Result<Self> {
        let alg = Self::abelian(basis);
        let n = alg.dim();
        let by_k: Table = (0..n)
            .map(|k| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                c.get(i)
                                    .and_then(|r| r.get(j))
                                    .and_then(|v| v.get(k))
                                    .copied()
                                    .unwrap_or(Rational::ZERO)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        if c.len() != n
            || c.iter()
                .any(|m| m.len() != n || m.iter().any(|r| r.len() != n))
        {
            return Err(Error::Invalid("bracket table has the wrong shape".into()));
        }
        check_antisym(&by_k, n, "bracket")?;
        Ok(LieAlgebraSC { c, ..alg })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    /// `c^k_{ij}`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.c[i][j][k]
    }

    pub fn table(&self) -> &Table {
        &self.c
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.dim();
        let mut out = vec![Rational::ZERO; n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].mul(&y[j])?;
                for (k, o) in out.iter_mut().enumerate() {
                    *o = o.add(&xy.mul(&self.c[i][j][k])?)?;
                }
            }
        }
        Ok(out)
    }

    /// `Σ_m c^m_{ij} c^l_{mk} + c^m_{jk} c^l_{mi} + c^m_{ki} c^l_{mj}` on all
    /// `i < j < k` and all `l`.
    pub fn check_jacobi_sc(&self) -> Result<SCCheck> {
        let n = self.dim();
        let c = &self.c;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut sum = Rational::ZERO;
                        for m in 0..n {
                            for (a, b, d) in [(i, j, k), (j, k, i), (k, i, j)] {
                                sum = sum.add(&c[a][b][m].mul(&c[m][d][l])?)?;
                            }
                        }
                        if !sum.is_zero() {
                            return Ok(SCCheck::Fail {
                                witness: [i, j, k, l],
                                value: sum.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(SCCheck::Pass)
    }

    /// Matrices of `ad*_{e_i}` on `g*` in the dual basis, with
    /// `⟨ad*_x α, y⟩ = −⟨α, [x, y]⟩`: `M_i[m][l] = −c^l_{im}`.
    pub fn coadjoint_matrices(&self) -> Result<Vec<Vec<Vec<Rational>>>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|m| (0..n).map(|l| self.c[i][m][l].neg()).collect())
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cobracket {
    d: Table,
}

impl Cobracket {
    pub fn zero(dim: usize) -> Self {
        Cobracket { d: zero_table(dim) }
    }

    /// From entries `(i, j, k, d^{jk}_i)`.
    pub fn new(dim: usize, entries: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        let mut d = zero_table(dim);
        for &(i, j, k, v) in entries {
            set_antisym(&mut d, i, j, k, v, "cobracket")?;
        }
        Ok(Cobracket { d })
    }

    pub fn from_table(d: Table) -> Result<Self> {
        check_antisym(&d, d.len(), "cobracket")?;
        Ok(Cobracket { d })
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// `d^{jk}_i`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.d[i][j][k]
    }

    pub fn table(&self) -> &Table {
        &self.d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBialgebra {
    pub algebra: LieAlgebraSC,
    pub cobracket: Cobracket,
}

impl LieBialgebra {
    pub fn new(algebra: LieAlgebraSC, cobracket: Cobracket) -> Result<Self> {
        if algebra.dim() != cobracket.dim() {
            return Err(Error::Invalid(format!(
                "bracket has dimension {}, cobracket {}",
                algebra.dim(),
                cobracket.dim()
            )));
        }
        Ok(LieBialgebra { algebra, cobracket })
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `ad_{e_x}` applied to the 2-tensor `t` by Leibniz.
    fn ad_on_tensor(&self, x: usize, t: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
        let n = self.dim();
        let c = &self.algebra.c;
        let mut out = vec![vec![Rational::ZERO; n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = Rational::ZERO;
                for m in 0..n {
                    acc = acc.add(&c[x][m][a].mul(&t[m][b])?)?;
                    acc = acc.add(&c[x][m][b].mul(&t[a][m])?)?;
                }
                out[a][b] = acc;
            }
        }
        Ok(out)
    }

    /// `δ([e_i,e_j]) = ad_{e_i}δ(e_j) − ad_{e_j}δ(e_i)` on every basis pair.
    pub fn check_cocycle(&self) -> Result<CocycleCheck> {
        let n = self.dim();
        let d = &self.cobracket.d;
        for i in 0..n {
            for j in i + 1..n {
                let lhs_coeffs = &self.algebra.c[i][j];
                let right_i = self.ad_on_tensor(i, &d[j])?;
                let right_j = self.ad_on_tensor(j, &d[i])?;
                for a in 0..n {
                    for b in 0..n {
                        let mut lhs = Rational::ZERO;
                        for (m, cm) in lhs_coeffs.iter().enumerate() {
                            lhs = lhs.add(&cm.mul(&d[m][a][b])?)?;
                        }
                        let defect = lhs.sub(&right_i[a][b])?.add(&right_j[a][b])?;
                        if !defect.is_zero() {
                            return Ok(CocycleCheck::Fail {
                                pair: [i, j],
                                entry: [a, b],
                                value: defect.to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(CocycleCheck::Pass)
    }

    /// Bracket on `g*` given by the transpose of `δ`.
    pub fn dual_algebra(&self) -> LieAlgebraSC {
        let n = self.dim();
        let basis: Vec<String> = self.algebra.basis.iter().map(|b| dual_name(b)).collect();
        let mut c = zero_table(n);
        for (j, cj) in c.iter_mut().enumerate() {
            for (k, cjk) in cj.iter_mut().enumerate() {
                for (i, v) in cjk.iter_mut().enumerate() {
                    *v = self.cobracket.d[i][j][k];
                }
            }
        }
        LieAlgebraSC { basis, c }
    }

    /// Jacobi for `[,]`, Jacobi for the transpose of `δ`, and the cocycle condition.
    pub fn validate(&self) -> Result<()> {
        if let SCCheck::Fail { witness, value } = self.algebra.check_jacobi_sc()? {
            return Err(Error::Precondition(format!(
                "bracket violates Jacobi at {witness:?} (value {value})"
            )));
        }
        if let SCCheck::Fail { witness, value } = self.dual_algebra().check_jacobi_sc()? {
            return Err(Error::Precondition(format!(
                "dual bracket violates Jacobi at {witness:?} (value {value})"
            )));
        }
        if let CocycleCheck::Fail { pair, entry, value } = self.check_cocycle()? {
            return Err(Error::Precondition(format!(
                "cobracket is not a 1-cocycle at pair {pair:?}, entry {entry:?} (value {value})"
            )));
        }
        Ok(())
    }

    /// `(g*, ᵗδ)` with cobracket the transpose of the bracket of `g`.
    pub fn dualize(&self) -> Result<LieBialgebra> {
        self.validate()?;
        let n = self.dim();
        let algebra = self.dual_algebra();
        let mut d = zero_table(n);
        for (k, dk) in d.iter_mut().enumerate() {
            for (i, dki) in dk.iter_mut().enumerate() {
                for (j, v) in dki.iter_mut().enumerate() {
                    *v = self.algebra.c[i][j][k];
                }
            }
        }
        Ok(LieBialgebra {
            algebra,
            cobracket: Cobracket { d },
        })
    }

    pub fn double_dual_roundtrip(&self) -> Result<bool> {
        Ok(self.dualize()?.dualize()? == *self)
    }
}
