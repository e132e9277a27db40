//! Expression trees for parametrisation components.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet as JetOf;
use crate::poly::Polynomial;
use crate::scalar::{factorial, Field};
use crate::{Jet, Poly, Scalar};

/// Power series normalized to vanish at 0.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Builtin {
    /// `exp(u) − 1`
    Exp1m,
    /// `log(1 + u)`
    Log1p,
    /// `sin(u)`
    SinS,
    /// `cos(u) − 1`
    CosM1,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Exp1m => "exp1m",
            Builtin::Log1p => "log1p",
            Builtin::SinS => "sinS",
            Builtin::CosM1 => "cosM1",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Builtin::Exp1m, Builtin::Log1p, Builtin::SinS, Builtin::CosM1].into_iter().find(|b| b.name() == s)
    }

    /// Taylor coefficients `c_0 … c_k` at 0.
    pub fn coefficients(self, k: usize) -> Vec<Scalar> {
        (0..=k)
            .map(|j| {
                if j == 0 {
                    return Scalar::zero();
                }
                let inv_fact = || Scalar::real(BigRational::new(1.into(), factorial(j as u32)));
                let sign = |s: bool| if s { -Scalar::one() } else { Scalar::one() };
                match self {
                    Builtin::Exp1m => inv_fact(),
                    Builtin::Log1p => sign(j % 2 == 0) * Scalar::from_ratio(1, j as i64),
                    Builtin::SinS if j % 2 == 1 => sign((j / 2) % 2 == 1) * inv_fact(),
                    Builtin::CosM1 if j % 2 == 0 => sign((j / 2) % 2 == 1) * inv_fact(),
                    _ => Scalar::zero(),
                }
            })
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Const(Scalar),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Builtin, Box<Expr>),
}

// Smart constructors fold constant subtrees; the parser builds trees only
// through these, which keeps printing and reparsing structurally stable.
impl Expr {
    pub fn constant(c: Scalar) -> Expr {
        Expr::Const(c)
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(x) => Expr::Const(-x),
            a => Expr::Neg(Box::new(a)),
        }
    }

    pub fn pow(a: Expr, e: u32) -> Expr {
        match a {
            Expr::Const(x) => Expr::Const(x.pow(e)),
            a => Expr::Pow(Box::new(a), e),
        }
    }

    pub fn call(f: Builtin, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    /// Whether no built-in series occurs.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.is_polynomial() && b.is_polynomial(),
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_polynomial(),
            Expr::Call(..) => false,
        }
    }

    /// The polynomial in absolute coordinates, for built-in-free trees.
    pub fn to_poly(&self, nvars: usize) -> Option<Poly> {
        Some(match self {
            Expr::Const(c) => Polynomial::constant(nvars, c.clone()),
            Expr::Var(i) => Polynomial::var(nvars, *i),
            Expr::Add(a, b) => a.to_poly(nvars)?.add(&b.to_poly(nvars)?),
            Expr::Sub(a, b) => a.to_poly(nvars)?.sub(&b.to_poly(nvars)?),
            Expr::Mul(a, b) => a.to_poly(nvars)?.mul(&b.to_poly(nvars)?),
            Expr::Neg(a) => a.to_poly(nvars)?.neg(),
            Expr::Pow(a, e) => a.to_poly(nvars)?.pow(*e),
            Expr::Call(..) => return None,
        })
    }

    /// Taylor expansion at `base` modulo degree `> k`; exact for polynomial trees.
    pub fn to_jet(&self, base: &[Scalar], k: usize) -> Result<Jet> {
        let n = base.len();
        if let Some(p) = self.to_poly(n) {
            return Ok(JetOf::from_absolute_poly(&p, base.to_vec()));
        }
        Ok(match self {
            Expr::Add(a, b) => a.to_jet(base, k)?.add(&b.to_jet(base, k)?),
            Expr::Sub(a, b) => a.to_jet(base, k)?.sub(&b.to_jet(base, k)?),
            Expr::Mul(a, b) => a.to_jet(base, k)?.mul(&b.to_jet(base, k)?, Some(k)),
            Expr::Neg(a) => a.to_jet(base, k)?.neg(),
            Expr::Pow(a, e) => a.to_jet(base, k)?.pow(*e, Some(k)),
            Expr::Call(f, a) => {
                let u = a.to_jet(base, k)?;
                let c = u.value();
                if !c.is_zero() {
                    return Err(Error::NonRationalExpansion { builtin: f.name().to_string(), value: c.to_string() });
                }
                JetOf::compose_series(&f.coefficients(k), &u, k)?
            }
            Expr::Const(_) | Expr::Var(_) => unreachable!("polynomial leaves are handled above"),
        })
    }

    /// Total degree for polynomial trees.
    pub fn degree(&self, nvars: usize) -> Option<usize> {
        self.to_poly(nvars).map(|p| p.degree().unwrap_or(0))
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => 5,
        }
    }

    /// Text that parses back to the same tree.
    pub fn display_with(&self, names: &[String]) -> String {
        let wrap = |e: &Expr, min: u8| {
            let s = e.display_with(names);
            if e.level() < min {
                format!("({s})")
            } else {
                s
            }
        };
        match self {
            Expr::Const(c) => {
                let s = c.to_string();
                if s.chars().all(|ch| ch.is_ascii_digit()) {
                    s
                } else {
                    format!("({s})")
                }
            }
            Expr::Var(i) => names[*i].clone(),
            Expr::Add(a, b) => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
            Expr::Sub(a, b) => format!("{} - {}", wrap(a, 1), wrap(b, 2)),
            Expr::Mul(a, b) => format!("{}*{}", wrap(a, 2), wrap(b, 3)),
            Expr::Neg(a) => format!("-{}", wrap(a, 3)),
            Expr::Pow(a, e) => format!("{}^{}", wrap(a, 5), e),
            Expr::Call(f, a) => format!("{}({})", f.name(), a.display_with(names)),
        }
    }
}
