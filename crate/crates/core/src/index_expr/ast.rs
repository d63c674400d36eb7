//! Expression tree and its canonical printer. Printing inserts only the
//! parentheses needed to parse back to the same tree.

use std::fmt;

/// Index-manipulating functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    /// `alt(e; a, b)`: `e_{..a..b..} - e_{..b..a..}`.
    Alt,
    /// `sym(e; a, b)`: `(e_{..a..b..} + e_{..b..a..}) / 2`.
    Sym,
    /// `cd(e; k)`: covariant derivative with the symmetric connection.
    Cd,
    /// `pd(e; k)`: partial derivative.
    Pd,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Alt => "alt",
            Func::Sym => "sym",
            Func::Cd => "cd",
            Func::Pd => "pd",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "alt" => Func::Alt,
            "sym" => Func::Sym,
            "cd" => Func::Cd,
            "pd" => Func::Pd,
            _ => return None,
        })
    }

    /// Number of index letters after the `;`.
    pub fn arity(self) -> usize {
        match self {
            Func::Alt | Func::Sym => 2,
            Func::Cd | Func::Pd => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Literal as written: an integer or a decimal.
    Number(String),
    /// `NAME{uppers;lowers}`; a bare `NAME` has no indices.
    Ref {
        name: String,
        upper: Vec<char>,
        lower: Vec<char>,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division by a literal.
    Div(Box<Expr>, String),
    Call {
        func: Func,
        arg: Box<Expr>,
        indices: Vec<char>,
    },
}

impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            _ => 4,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Number(s) => f.write_str(s),
            Expr::Ref { name, upper, lower } => {
                f.write_str(name)?;
                if !upper.is_empty() || !lower.is_empty() {
                    let u: String = upper.iter().collect();
                    let l: String = lower.iter().collect();
                    write!(f, "{{{u};{l}}}")?;
                }
                Ok(())
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                })?;
                b.write(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write(f, 2)?;
                f.write_str(" * ")?;
                b.write(f, 3)
            }
            Expr::Div(a, n) => {
                a.write(f, 2)?;
                write!(f, " / {n}")
            }
            Expr::Call { func, arg, indices } => {
                write!(f, "{}(", func.name())?;
                arg.write(f, 0)?;
                let idx: Vec<String> = indices.iter().map(|c| c.to_string()).collect();
                write!(f, "; {})", idx.join(", "))
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
