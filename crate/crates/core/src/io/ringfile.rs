use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::construct::VarietyData;
use crate::error::Result;
use crate::poly::{format_rational, Generator, Monomial, Polynomial, Rational, VarList};
use crate::ring::{QuotientRing, RingPresentation};

/// `coeff · Π name^exp`, kept exactly as written (factor order and repeats preserved).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    pub factors: Vec<(String, u32)>,
}

/// `coeff · left (x) right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorTerm {
    pub coeff: Rational,
    pub left: Vec<(String, u32)>,
    pub right: Vec<(String, u32)>,
}

/// A sum of terms, in the order written.
pub type Expr = Vec<Term>;

/// The parsed form of a `.ring` document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingFile {
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<(String, u32)>,
    pub relations: Vec<Expr>,
    pub chern_tangent: Expr,
    pub diagonal: Vec<TensorTerm>,
    pub point: Expr,
}

fn write_factors(f: &mut fmt::Formatter<'_>, factors: &[(String, u32)]) -> fmt::Result {
    for (i, (n, e)) in factors.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        f.write_str(n)?;
        if *e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Writes `|coeff|·factors`; the sign is handled by the caller.
fn write_unsigned(f: &mut fmt::Formatter<'_>, coeff: &Rational, factors: &[(String, u32)]) -> fmt::Result {
    let abs = coeff.abs();
    if factors.is_empty() {
        return f.write_str(&format_rational(&abs));
    }
    if !abs.is_one() {
        write!(f, "{}*", format_rational(&abs))?;
    }
    write_factors(f, factors)
}

fn write_sign(f: &mut fmt::Formatter<'_>, first: bool, coeff: &Rational) -> fmt::Result {
    match (first, coeff.is_negative()) {
        (true, true) => f.write_str("-"),
        (true, false) => Ok(()),
        (false, true) => f.write_str(" - "),
        (false, false) => f.write_str(" + "),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sign(f, true, &self.coeff)?;
        write_unsigned(f, &self.coeff, &self.factors)
    }
}

struct ExprDisplay<'a>(&'a [Term]);

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.0.iter().enumerate() {
            write_sign(f, i == 0, &t.coeff)?;
            write_unsigned(f, &t.coeff, &t.factors)?;
        }
        Ok(())
    }
}

/// Writes an expression the way the parser reads it back.
pub fn format_expr(e: &[Term]) -> String {
    ExprDisplay(e).to_string()
}

impl fmt::Display for RingFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variety {} dim {}", self.name, self.dimension)?;
        let gens: Vec<String> = self.generators.iter().map(|(n, d)| format!("{n}:{d}")).collect();
        writeln!(f, "generators: {}", gens.join(", "))?;
        let rels: Vec<String> = self.relations.iter().map(|r| format_expr(r)).collect();
        writeln!(f, "relations: {}", rels.join(", "))?;
        writeln!(f, "chern_tangent: {}", ExprDisplay(&self.chern_tangent))?;
        f.write_str("diagonal: ")?;
        if self.diagonal.is_empty() {
            f.write_str("0 (x) 1")?;
        }
        for (i, t) in self.diagonal.iter().enumerate() {
            write_sign(f, i == 0, &t.coeff)?;
            write_unsigned(f, &t.coeff, &t.left)?;
            f.write_str(" (x) ")?;
            write_unsigned(f, &Rational::one(), &t.right)?;
        }
        writeln!(f)?;
        writeln!(f, "point: {}", ExprDisplay(&self.point))
    }
}

fn factors_poly(vars: &Arc<VarList>, factors: &[(String, u32)]) -> Polynomial {
    factors.iter().fold(Polynomial::one(vars), |acc, (n, e)| {
        let i = vars.position(n, None).expect("names checked by the parser");
        &acc * &Polynomial::var(vars, i).pow(*e)
    })
}

fn expr_poly(vars: &Arc<VarList>, e: &[Term]) -> Polynomial {
    e.iter().fold(Polynomial::zero(vars), |acc, t| {
        &acc + &factors_poly(vars, &t.factors).scale(&t.coeff)
    })
}

fn monomial_factors(vars: &VarList, m: &Monomial) -> Vec<(String, u32)> {
    m.0.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| (vars.get(i).display_name(), e))
        .collect()
}

fn poly_expr(p: &Polynomial) -> Expr {
    p.display_terms()
        .into_iter()
        .map(|(m, c)| Term {
            coeff: c.clone(),
            factors: monomial_factors(p.vars(), m),
        })
        .collect()
}

impl RingFile {
    pub fn vars(&self) -> Result<Arc<VarList>> {
        VarList::new(self.generators.iter().map(|(n, d)| Generator::new(n.clone(), *d)).collect())
    }

    pub fn presentation(&self) -> Result<RingPresentation> {
        let vars = self.vars()?;
        let relations = self.relations.iter().map(|r| expr_poly(&vars, r)).collect();
        RingPresentation::new(self.name.clone(), vars, relations, self.dimension)
    }

    /// Build the variety data; the diagonal is not validated here.
    pub fn to_variety(&self) -> Result<VarietyData> {
        let ring = QuotientRing::new(self.presentation()?)?;
        let vars = ring.vars().clone();
        let chern = expr_poly(&vars, &self.chern_tangent);
        let diagonal = self
            .diagonal
            .iter()
            .map(|t| (factors_poly(&vars, &t.left).scale(&t.coeff), factors_poly(&vars, &t.right)))
            .collect();
        let point = expr_poly(&vars, &self.point);
        VarietyData::new(self.name.clone(), ring, &chern, diagonal, point)
    }

    /// The document describing `x`, with every expression written in normal-form term order.
    pub fn from_variety(x: &VarietyData) -> RingFile {
        let vars = x.vars();
        let mut diagonal = Vec::new();
        for (a, b) in &x.diagonal_terms {
            for (ma, ca) in a.display_terms() {
                for (mb, cb) in b.display_terms() {
                    let coeff = ca * cb;
                    if !coeff.is_zero() {
                        diagonal.push(TensorTerm {
                            coeff,
                            left: monomial_factors(vars, ma),
                            right: monomial_factors(vars, mb),
                        });
                    }
                }
            }
        }
        RingFile {
            name: x.name.clone(),
            dimension: x.dimension,
            generators: vars.gens().iter().map(|g| (g.display_name(), g.degree)).collect(),
            relations: x.ring.presentation().relations.iter().map(poly_expr).collect(),
            chern_tangent: poly_expr(&x.chern_total()),
            diagonal,
            point: poly_expr(&x.point_class),
        }
    }
}
