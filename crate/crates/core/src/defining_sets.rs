//! Defining sets `D_λ`, `D*` and their orbit-punctured versions.
//!
//! A defining set is a list of pairs `(x, y) ∈ F_{p^m}×F_{p^m}` in canonical
//! (ascending index) order; every pair contributes one coordinate to each
//! codeword of the associated trace code.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{ExtensionField, FieldElement};

pub type Pair = (FieldElement, FieldElement);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    D0,
    DLambda(u32),
    DStar,
    PuncturedD0,
    PuncturedDStar,
    PuncturedDLambda(u32),
}

impl SetKind {
    /// Value of `Tr(y x^{d+1})` shared by every member.
    pub fn lambda(self) -> u32 {
        match self {
            SetKind::DLambda(l) | SetKind::PuncturedDLambda(l) => l,
            _ => 0,
        }
    }

    pub fn is_punctured(self) -> bool {
        matches!(
            self,
            SetKind::PuncturedD0 | SetKind::PuncturedDStar | SetKind::PuncturedDLambda(_)
        )
    }

    pub fn excludes_zero_y(self) -> bool {
        matches!(self, SetKind::DStar | SetKind::PuncturedDStar)
    }

    /// Short machine name used in JSON and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            SetKind::D0 => "d0",
            SetKind::DLambda(_) => "dlambda",
            SetKind::DStar => "dstar",
            SetKind::PuncturedD0 => "punctured-d0",
            SetKind::PuncturedDStar => "punctured-dstar",
            SetKind::PuncturedDLambda(_) => "punctured-dlambda",
        }
    }

    /// Unpunctured parent kind.
    pub fn parent(self) -> SetKind {
        match self {
            SetKind::PuncturedD0 => SetKind::D0,
            SetKind::PuncturedDStar => SetKind::DStar,
            SetKind::PuncturedDLambda(l) => SetKind::DLambda(l),
            k => k,
        }
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetKind::DLambda(l) | SetKind::PuncturedDLambda(l) => {
                write!(f, "{}(lambda={})", self.name(), l)
            }
            _ => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DefiningSet<'f> {
    field: &'f ExtensionField,
    kind: SetKind,
    d: u64,
    pairs: Vec<Pair>,
}

/// Serializable description of a defining set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefiningSetDescription {
    pub p: u32,
    pub m: u32,
    pub d: u64,
    pub kind: String,
    pub lambda: u32,
    pub size: usize,
    pub pairs: Vec<[u32; 2]>,
}

/// `Tr(y x^{d+1})`.
#[inline]
pub fn membership_value(f: &ExtensionField, d: u64, x: FieldElement, y: FieldElement) -> u32 {
    f.trace(f.mul(y, f.pow(x, d + 1)))
}

fn check_lambda(f: &ExtensionField, lambda: u32) -> Result<()> {
    if lambda >= f.p() {
        return Err(Error::InvalidLambda { lambda, p: f.p() });
    }
    Ok(())
}

/// All `(x, y) ∈ F*×F` with `Tr(y x^{d+1}) = λ`.
pub fn build_d_lambda(f: &ExtensionField, d: u64, lambda: u32) -> Result<DefiningSet<'_>> {
    if d < 1 {
        return Err(Error::InvalidExponent(d));
    }
    check_lambda(f, lambda)?;
    let kind = if lambda == 0 {
        SetKind::D0
    } else {
        SetKind::DLambda(lambda)
    };
    Ok(DefiningSet {
        field: f,
        kind,
        d,
        pairs: filter_pairs(f, d, lambda, false),
    })
}

/// `D_0` without the pairs with `y = 0`.
pub fn build_d_star(f: &ExtensionField, d: u64) -> Result<DefiningSet<'_>> {
    if d < 1 {
        return Err(Error::InvalidExponent(d));
    }
    Ok(DefiningSet {
        field: f,
        kind: SetKind::DStar,
        d,
        pairs: filter_pairs(f, d, 0, true),
    })
}

fn filter_pairs(f: &ExtensionField, d: u64, lambda: u32, nonzero_y: bool) -> Vec<Pair> {
    let mut pairs = Vec::new();
    let y_start = u32::from(nonzero_y);
    for x in f.nonzero_elements() {
        let xd1 = f.pow(x, d + 1);
        for y in (y_start..f.order()).map(FieldElement) {
            if f.trace(f.mul(y, xd1)) == lambda {
                pairs.push((x, y));
            }
        }
    }
    pairs
}

/// Builds the set named by `kind`, puncturing when the kind asks for it.
pub fn build(f: &ExtensionField, kind: SetKind, d: u64) -> Result<DefiningSet<'_>> {
    match kind {
        SetKind::D0 => build_d_lambda(f, d, 0),
        SetKind::DLambda(l) => build_d_lambda(f, d, l),
        SetKind::DStar => build_d_star(f, d),
        SetKind::PuncturedD0 => puncture_scalar_orbits(&build_d_lambda(f, d, 0)?),
        SetKind::PuncturedDStar => puncture_scalar_orbits(&build_d_star(f, d)?),
        SetKind::PuncturedDLambda(l) => {
            if l == 0 {
                return Err(Error::PunctureKind(SetKind::D0.to_string()));
            }
            puncture_sign_orbits(&build_d_lambda(f, d, l)?)
        }
    }
}

/// One representative per orbit of `(x, y) ↦ (cx, cy)`, `c ∈ F_p^*`.
pub fn puncture_scalar_orbits<'f>(s: &DefiningSet<'f>) -> Result<DefiningSet<'f>> {
    let kind = match s.kind {
        SetKind::D0 => SetKind::PuncturedD0,
        SetKind::DStar => SetKind::PuncturedDStar,
        other => return Err(Error::PunctureKind(other.to_string())),
    };
    let p = s.field.p();
    if s.d % (p as u64 - 1) != 0 {
        return Err(Error::ScalarPunctureExponent { p, d: s.d });
    }
    let f = s.field;
    let scalars: Vec<FieldElement> = (1..p as i64).map(|c| f.from_prime(c)).collect();
    let pairs = representatives(s, |&(x, y)| {
        scalars.iter().map(|&c| (f.mul(c, x), f.mul(c, y))).collect()
    })?;
    Ok(DefiningSet {
        field: f,
        kind,
        d: s.d,
        pairs,
    })
}

/// One representative per `{(x, y), (-x, -y)}` orbit of `D_λ`, `λ ≠ 0`.
pub fn puncture_sign_orbits<'f>(s: &DefiningSet<'f>) -> Result<DefiningSet<'f>> {
    let lambda = match s.kind {
        SetKind::DLambda(l) if l != 0 => l,
        other => return Err(Error::PunctureKind(other.to_string())),
    };
    if s.d % 2 != 0 {
        return Err(Error::SignPunctureExponent(s.d));
    }
    let f = s.field;
    let pairs = representatives(s, |&(x, y)| vec![(x, y), (f.neg(x), f.neg(y))])?;
    Ok(DefiningSet {
        field: f,
        kind: SetKind::PuncturedDLambda(lambda),
        d: s.d,
        pairs,
    })
}

/// Keeps the lexicographically smallest member of each orbit after checking
/// that every orbit is full-sized and contained in the set.
fn representatives<F>(s: &DefiningSet<'_>, orbit: F) -> Result<Vec<Pair>>
where
    F: Fn(&Pair) -> Vec<Pair>,
{
    let members: HashSet<Pair> = s.pairs.iter().copied().collect();
    let mut reps = Vec::new();
    let mut expected_size = None;
    for pair in &s.pairs {
        let mut orb = orbit(pair);
        orb.sort_unstable();
        orb.dedup();
        let size = *expected_size.get_or_insert(orbit(pair).len());
        if orb.len() != size || !orb.iter().all(|q| members.contains(q)) {
            return Err(Error::BrokenOrbit {
                x: pair.0 .0,
                y: pair.1 .0,
            });
        }
        if orb[0] == *pair {
            reps.push(*pair);
        }
    }
    if let Some(size) = expected_size {
        if reps.len() * size != s.pairs.len() {
            return Err(Error::BrokenOrbit { x: 0, y: 0 });
        }
    }
    Ok(reps)
}

impl<'f> DefiningSet<'f> {
    pub fn field(&self) -> &'f ExtensionField {
        self.field
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Membership predicate of the (unpunctured) parent set.
    pub fn satisfies_predicate(&self, x: FieldElement, y: FieldElement) -> bool {
        !x.is_zero()
            && !(self.kind.excludes_zero_y() && y.is_zero())
            && membership_value(self.field, self.d, x, y) == self.kind.lambda()
    }

    /// Re-checks the predicate, canonical ordering and absence of `(0, 0)`.
    pub fn verify(&self) -> bool {
        self.pairs.windows(2).all(|w| w[0] < w[1])
            && self.pairs.iter().all(|&(x, y)| self.satisfies_predicate(x, y))
    }

    pub fn describe(&self) -> DefiningSetDescription {
        DefiningSetDescription {
            p: self.field.p(),
            m: self.field.m(),
            d: self.d,
            kind: self.kind.name().to_string(),
            lambda: self.kind.lambda(),
            size: self.pairs.len(),
            pairs: self.pairs.iter().map(|&(x, y)| [x.0, y.0]).collect(),
        }
    }
}

/// `#D_λ = p^{2m-1} - p^{m-1}`.
pub fn d_lambda_size(p: u64, m: u32) -> u64 {
    p.pow(2 * m - 1) - p.pow(m - 1)
}

/// `#D* = p^{2m-1} - p^m - p^{m-1} + 1`.
pub fn d_star_size(p: u64, m: u32) -> u64 {
    p.pow(2 * m - 1) - p.pow(m) - p.pow(m - 1) + 1
}
