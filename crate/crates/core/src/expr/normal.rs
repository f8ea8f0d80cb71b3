//! Rational-function normal form.
//!
//! An expression normalizes to `num / den`, two polynomials over *atoms*:
//! coordinates plus opaque `exp(u)` / `log(u)` atoms keyed by the normal form
//! of their argument. No exp/log identities are applied. The denominator is
//! made monic under a graded-lex term order, common monomial factors are
//! removed, and exact polynomial quotients are cancelled, so `num` is the
//! zero polynomial iff the expression is structurally zero.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::tree::{Expr, Node};
use crate::error::{Error, Result};
use crate::rational::Rational;

const MAX_POWER: u32 = 512;
const MAX_DIVISION_STEPS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    Coord(usize),
    Exp(Box<NormalForm>),
    Log(Box<NormalForm>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    fn atom(a: Atom) -> Self {
        Monomial(vec![(a, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|(_, e)| *e as u64).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some((x, ex)), Some((y, ey))) => match x.cmp(y) {
                    Ordering::Equal => {
                        out.push((x.clone(), ex + ey));
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => {
                        out.push((x.clone(), *ex));
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push((y.clone(), *ey));
                        j += 1;
                    }
                },
                (Some(t), None) => {
                    out.push(t.clone());
                    i += 1;
                }
                (None, Some(t)) => {
                    out.push(t.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial(out)
    }

    fn exponent(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(a))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    fn divides(&self, m: &Monomial) -> bool {
        self.0.iter().all(|(a, e)| m.exponent(a) >= *e)
    }

    /// `m / self`, assuming `self` divides `m`.
    fn quotient_of(&self, m: &Monomial) -> Monomial {
        Monomial(
            m.0.iter()
                .filter_map(|(a, e)| {
                    let r = e - self.exponent(a);
                    (r > 0).then(|| (a.clone(), r))
                })
                .collect(),
        )
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(a, e)| {
                    let m = (*e).min(other.exponent(a));
                    (m > 0).then(|| (a.clone(), m))
                })
                .collect(),
        )
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }
}

/// Graded lexicographic term order (atom order decides ties).
fn grlex(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.0.get(i), b.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((x, ex)), Some((y, ey))) => match x.cmp(y) {
                    Ordering::Equal if ex == ey => {
                        i += 1;
                        j += 1;
                    }
                    Ordering::Equal => return ex.cmp(ey),
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Poly(BTreeMap<Monomial, Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.0.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one() -> Self {
        Poly::constant(Rational::ONE)
    }

    fn atom(a: Atom) -> Self {
        let mut p = Poly::zero();
        p.0.insert(Monomial::atom(a), Rational::ONE);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.0.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::ZERO),
            1 => self.0.get(&Monomial::one()).copied(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.0.get_mut(&m) {
            Some(existing) => {
                let s = existing.add(&c)?;
                if s.is_zero() {
                    self.0.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.0.insert(m, c);
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Result<Poly> {
        self.scale(&Rational::int(-1))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg()?)
    }

    pub fn scale(&self, c: &Rational) -> Result<Poly> {
        if c.is_zero() {
            return Ok(Poly::zero());
        }
        let mut out = BTreeMap::new();
        for (m, k) in &self.0 {
            out.insert(m.clone(), k.mul(c)?);
        }
        Ok(Poly(out))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(m1.mul(m2), c1.mul(c2)?)?;
            }
        }
        Ok(out)
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Result<Poly> {
        let mut out = BTreeMap::new();
        for (m1, c1) in &self.0 {
            out.insert(m1.mul(m), c1.mul(c)?);
        }
        Ok(Poly(out))
    }

    pub fn pow(&self, n: u32) -> Result<Poly> {
        if n > MAX_POWER {
            return Err(Error::Overflow);
        }
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.0.iter().max_by(|x, y| grlex(x.0, y.0))
    }

    fn monomial_content(&self) -> Monomial {
        let mut it = self.0.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    fn div_monomial(&self, d: &Monomial) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (d.quotient_of(m), *c)).collect())
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    fn div_exact(&self, d: &Poly) -> Result<Option<Poly>> {
        let (lm, lc) = match d.leading() {
            Some((m, c)) => (m.clone(), *c),
            None => return Err(Error::DivisionByZero),
        };
        let mut q = Poly::zero();
        let mut r = self.clone();
        for _ in 0..MAX_DIVISION_STEPS {
            let (rm, rc) = match r.leading() {
                None => return Ok(Some(q)),
                Some((m, c)) => (m.clone(), *c),
            };
            if !lm.divides(&rm) {
                return Ok(None);
            }
            let tm = lm.quotient_of(&rm);
            let tc = rc.div(&lc)?;
            q.add_term(tm.clone(), tc)?;
            r = r.sub(&d.mul_term(&tm, &tc)?)?;
        }
        Ok(None)
    }

    fn derivative(&self, x: usize) -> Result<NormalForm> {
        let mut acc = NormalForm::zero();
        for (m, c) in &self.0 {
            for (k, (atom, e)) in m.0.iter().enumerate() {
                let d_atom = match atom {
                    Atom::Coord(i) if *i == x => NormalForm::one(),
                    Atom::Coord(_) => continue,
                    Atom::Exp(u) => {
                        let du = u.derivative(x)?;
                        if du.is_zero() {
                            continue;
                        }
                        NormalForm::from_atom(atom.clone()).mul(&du)?
                    }
                    Atom::Log(u) => {
                        let du = u.derivative(x)?;
                        if du.is_zero() {
                            continue;
                        }
                        du.div(u)?
                    }
                };
                let mut rest = m.0.clone();
                if *e == 1 {
                    rest.remove(k);
                } else {
                    rest[k].1 = e - 1;
                }
                let coeff = c.mul(&Rational::int(*e as i64))?;
                let mut term = Poly::zero();
                term.add_term(Monomial(rest), coeff)?;
                acc = acc.add(&NormalForm::from_poly(term).mul(&d_atom)?)?;
            }
        }
        Ok(acc)
    }

    fn eval(&self, point: &[f64]) -> Option<f64> {
        let mut sum = 0.0;
        for (m, c) in &self.0 {
            let mut t = c.to_f64();
            for (a, e) in &m.0 {
                let v = match a {
                    Atom::Coord(i) => point[*i],
                    Atom::Exp(u) => u.eval(point)?.exp(),
                    Atom::Log(u) => {
                        let arg = u.eval(point)?;
                        if arg <= 0.0 {
                            return None;
                        }
                        arg.ln()
                    }
                };
                t *= v.powi(*e as i32);
            }
            sum += t;
        }
        sum.is_finite().then_some(sum)
    }

    fn to_expr(&self) -> Expr {
        let mut terms: Vec<(&Monomial, &Rational)> = self.0.iter().collect();
        terms.sort_by(|x, y| grlex(y.0, x.0));
        let mut acc: Option<Expr> = None;
        for (m, c) in terms {
            let negative = c.is_negative();
            let magnitude = c.abs();
            let mut factors: Vec<Expr> = Vec::new();
            if !magnitude.is_one() || m.is_one() {
                factors.push(Expr::constant(magnitude));
            }
            for (a, e) in &m.0 {
                let base = match a {
                    Atom::Coord(i) => Expr::coord(*i),
                    Atom::Exp(u) => u.to_expr().exp(),
                    Atom::Log(u) => u.to_expr().log(),
                };
                factors.push(if *e == 1 { base } else { base.powi(*e as i32) });
            }
            if negative && acc.is_none() {
                factors[0] = -&factors[0];
            }
            let term = factors.into_iter().reduce(|a, b| a * b).unwrap();
            acc = Some(match acc {
                None => term,
                Some(s) if negative => s - term,
                Some(s) => s + term,
            });
        }
        acc.unwrap_or_else(Expr::zero)
    }
}

/// `num / den` in lowest terms as far as monomial content and exact
/// divisibility allow; `den` is monic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormalForm {
    num: Poly,
    den: Poly,
}

impl NormalForm {
    pub fn zero() -> Self {
        NormalForm {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        NormalForm::constant(Rational::ONE)
    }

    pub fn constant(c: Rational) -> Self {
        NormalForm {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn coord(i: usize) -> Self {
        NormalForm::from_atom(Atom::Coord(i))
    }

    fn from_atom(a: Atom) -> Self {
        NormalForm::from_poly(Poly::atom(a))
    }

    fn from_poly(p: Poly) -> Self {
        NormalForm {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) if d.is_one() => Some(n),
            _ => None,
        }
    }

    fn build(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(NormalForm::zero());
        }
        let (mut num, mut den) = cancel(num, den)?;
        let (_, lc) = den.leading().map(|(m, c)| (m.clone(), *c)).unwrap();
        if !lc.is_one() {
            let inv = Rational::ONE.div(&lc)?;
            num = num.scale(&inv)?;
            den = den.scale(&inv)?;
        }
        Ok(NormalForm { num, den })
    }

    pub fn add(&self, other: &NormalForm) -> Result<NormalForm> {
        if self.den == other.den {
            return NormalForm::build(self.num.add(&other.num)?, self.den.clone());
        }
        if other.den.as_constant().is_none() {
            if let Some(q) = other.den.div_exact(&self.den)? {
                return NormalForm::build(self.num.mul(&q)?.add(&other.num)?, other.den.clone());
            }
        }
        if self.den.as_constant().is_none() {
            if let Some(q) = self.den.div_exact(&other.den)? {
                return NormalForm::build(self.num.add(&other.num.mul(&q)?)?, self.den.clone());
            }
        }
        NormalForm::build(
            self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?,
            self.den.mul(&other.den)?,
        )
    }

    pub fn neg(&self) -> Result<NormalForm> {
        Ok(NormalForm {
            num: self.num.neg()?,
            den: self.den.clone(),
        })
    }

    pub fn sub(&self, other: &NormalForm) -> Result<NormalForm> {
        self.add(&other.neg()?)
    }

    pub fn scale(&self, c: &Rational) -> Result<NormalForm> {
        if c.is_zero() {
            return Ok(NormalForm::zero());
        }
        Ok(NormalForm {
            num: self.num.scale(c)?,
            den: self.den.clone(),
        })
    }

    pub fn mul(&self, other: &NormalForm) -> Result<NormalForm> {
        if self.is_zero() || other.is_zero() {
            return Ok(NormalForm::zero());
        }
        let (n1, d2) = cancel(self.num.clone(), other.den.clone())?;
        let (n2, d1) = cancel(other.num.clone(), self.den.clone())?;
        NormalForm::build(n1.mul(&n2)?, d1.mul(&d2)?)
    }

    pub fn recip(&self) -> Result<NormalForm> {
        NormalForm::build(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &NormalForm) -> Result<NormalForm> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.mul(&other.recip()?)
    }

    pub fn pow(&self, n: i32) -> Result<NormalForm> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs();
        if k > MAX_POWER {
            return Err(Error::Overflow);
        }
        Ok(NormalForm {
            num: base.num.pow(k)?,
            den: base.den.pow(k)?,
        })
        .and_then(|nf| NormalForm::build(nf.num, nf.den))
    }

    pub fn exp(&self) -> Result<NormalForm> {
        if self.is_zero() {
            return Ok(NormalForm::one());
        }
        Ok(NormalForm::from_atom(Atom::Exp(Box::new(self.clone()))))
    }

    pub fn log(&self) -> Result<NormalForm> {
        if let Some(c) = self.as_constant() {
            if c.is_one() {
                return Ok(NormalForm::zero());
            }
            if !(c > Rational::ZERO) {
                return Err(Error::Singular(format!("log({c})")));
            }
        }
        Ok(NormalForm::from_atom(Atom::Log(Box::new(self.clone()))))
    }

    pub fn derivative(&self, x: usize) -> Result<NormalForm> {
        let dn = self.num.derivative(x)?;
        if self.den.as_constant().is_some() {
            return Ok(dn);
        }
        let dd = self.den.derivative(x)?;
        let num = NormalForm::from_poly(self.num.clone());
        let den = NormalForm::from_poly(self.den.clone());
        dn.mul(&den)?.sub(&num.mul(&dd)?)?.div(&den.pow(2)?)
    }

    pub fn from_expr(e: &Expr) -> Result<NormalForm> {
        match e.node() {
            Node::Const(r) => Ok(NormalForm::constant(*r)),
            Node::Coord(i) => Ok(NormalForm::coord(*i)),
            Node::Add(a, b) => NormalForm::from_expr(a)?.add(&NormalForm::from_expr(b)?),
            Node::Sub(a, b) => NormalForm::from_expr(a)?.sub(&NormalForm::from_expr(b)?),
            Node::Mul(a, b) => NormalForm::from_expr(a)?.mul(&NormalForm::from_expr(b)?),
            Node::Div(a, b) => NormalForm::from_expr(a)?.div(&NormalForm::from_expr(b)?),
            Node::Pow(a, n) => NormalForm::from_expr(a)?.pow(*n),
            Node::Neg(a) => NormalForm::from_expr(a)?.neg(),
            Node::Exp(a) => NormalForm::from_expr(a)?.exp(),
            Node::Log(a) => NormalForm::from_expr(a)?.log(),
        }
    }

    pub fn to_expr(&self) -> Expr {
        let num = self.num.to_expr();
        if self.den.as_constant().is_some() {
            num
        } else {
            num / self.den.to_expr()
        }
    }

    pub fn eval(&self, point: &[f64]) -> Option<f64> {
        let n = self.num.eval(point)?;
        let d = self.den.eval(point)?;
        if d == 0.0 {
            return None;
        }
        let v = n / d;
        v.is_finite().then_some(v)
    }
}

/// Removes common monomial content and cancels exact polynomial quotients.
fn cancel(num: Poly, den: Poly) -> Result<(Poly, Poly)> {
    if num.is_zero() {
        return Ok((num, Poly::one()));
    }
    let g = num.monomial_content().gcd(&den.monomial_content());
    let (num, den) = if g.is_one() {
        (num, den)
    } else {
        (num.div_monomial(&g), den.div_monomial(&g))
    };
    if num.as_constant().is_some() || den.as_constant().is_some() {
        return Ok((num, den));
    }
    if let Some(q) = num.div_exact(&den)? {
        return Ok((q, Poly::one()));
    }
    if let Some(q) = den.div_exact(&num)? {
        return Ok((Poly::one(), q));
    }
    Ok((num, den))
}

/// Rational-function normal form, printed back as an expression tree.
pub fn simplify(e: &Expr) -> Result<Expr> {
    Ok(NormalForm::from_expr(e)?.to_expr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Chart};

    fn chart() -> Chart {
        Chart::new("m", &["a", "b", "p", "q"]).unwrap()
    }

    fn nf(text: &str) -> NormalForm {
        NormalForm::from_expr(&parse(text, &chart()).unwrap()).unwrap()
    }

    fn simp(text: &str) -> String {
        simplify(&parse(text, &chart()).unwrap())
            .unwrap()
            .to_string_on(&chart())
    }

    #[test]
    fn cancels_monomial_denominators() {
        assert_eq!(simp("(1/(a*b))*(a*b)"), "1");
        assert_eq!(simp("a*b - b*a"), "0");
    }

    #[test]
    fn exp_atoms_collect_powers() {
        assert_eq!(simp("exp(p)*exp(p)"), "exp(p)^2");
        // arguments are normalized, so equal arguments share one atom
        assert_eq!(simp("exp(p + p) - exp(2*p)"), "0");
    }

    #[test]
    fn no_log_rewriting() {
        assert!(!nf("log(a*b) - log(a) - log(b)").is_zero());
        assert!(nf("log(1) + exp(0) - 1").is_zero());
    }

    #[test]
    fn exact_polynomial_quotients_cancel() {
        assert_eq!(simp("(a^2 - b^2)/(a - b)"), "a + b");
        assert_eq!(simp("(a + b)/(a^2 + 2*a*b + b^2)"), "1/(a + b)");
    }

    #[test]
    fn denominator_is_monic() {
        assert_eq!(nf("1/(2*a + 2)"), nf("(1/2)/(a + 1)"));
    }

    #[test]
    fn division_by_structural_zero() {
        let e = parse("1/(a - a)", &chart()).unwrap();
        assert_eq!(simplify(&e), Err(Error::DivisionByZero));
        let e = parse("log(0*a)", &chart()).unwrap();
        assert!(matches!(simplify(&e), Err(Error::Singular(_))));
    }

    #[test]
    fn overflow_is_reported() {
        let e = parse("(1000000*a)^4", &chart()).unwrap();
        assert_eq!(simplify(&e), Err(Error::Overflow));
    }

    #[test]
    fn derivative_rules() {
        assert_eq!(nf("a*b").derivative(0).unwrap(), nf("b"));
        assert_eq!(nf("log(a)").derivative(0).unwrap(), nf("1/a"));
        assert_eq!(nf("exp(p)").derivative(3).unwrap(), nf("0"));
        assert_eq!(nf("exp(a*b)").derivative(1).unwrap(), nf("a*exp(a*b)"));
        assert_eq!(nf("a/(a + b)").derivative(0).unwrap(), nf("b/(a + b)^2"));
    }
}
