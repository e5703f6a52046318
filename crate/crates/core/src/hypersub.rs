//! Hypersubstitutions of a finite type and their extension to all
//! terms.
//!
//! A hypersubstitution assigns to every operation symbol a term of the
//! same arity over the argument variables. It extends to arbitrary
//! terms by leaving variables unchanged and substituting transformed
//! arguments into the image of each head symbol. Applying it to both
//! sides of an identity yields the derived identity.

use crate::term::{parse_term, substitute, Identity, Signature, SymbolId, Term};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// A map from operation symbols to same-arity terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersubstitution {
    sig: Signature,
    images: Vec<Term>,
}

impl Hypersubstitution {
    /// Builds a hypersubstitution, checking that each image is a term
    /// over `sig` in the variables `0..arity` of its symbol.
    pub fn new(sig: Signature, images: Vec<Term>) -> Result<Self> {
        if images.len() != sig.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} images for {} symbols",
                images.len(),
                sig.len()
            )));
        }
        for (i, image) in images.iter().enumerate() {
            image.check_signature(&sig)?;
            let sym = sig.symbol(SymbolId(i));
            if let Some(&v) = image.variables_in_order().iter().find(|&&v| v >= sym.arity) {
                return Err(Error::HypersubVariable {
                    symbol: sym.name.clone(),
                    var: crate::term::var_name(v),
                    arity: sym.arity,
                });
            }
        }
        Ok(Hypersubstitution { sig, images })
    }

    /// The trivial hypersubstitution `f ↦ f(x, y, ...)`.
    pub fn identity(sig: Signature) -> Self {
        let images = sig
            .symbols()
            .map(|(id, sym)| Term::App(id, (0..sym.arity).map(Term::Var).collect()))
            .collect();
        Hypersubstitution { sig, images }
    }

    /// The six binary-band hypersubstitutions: `s1(xy)=x`, `s2(xy)=y`,
    /// `s3(xy)=xy`, `s4(xy)=yx`, `s5(xy)=xyx`, `s6(xy)=yxy`.
    pub fn band_sigma(k: usize) -> Result<Self> {
        let word = match k {
            1 => "x",
            2 => "y",
            3 => "xy",
            4 => "yx",
            5 => "xyx",
            6 => "yxy",
            _ => {
                return Err(Error::BadSigmaLiteral(
                    format!("s{k}"),
                    "band names are s1..s6".into(),
                ))
            }
        };
        let sig = Signature::band();
        let image = parse_term(word, &sig)?;
        Hypersubstitution::new(sig, vec![image])
    }

    /// Parses a CLI literal: a builtin name `s1..s6`, or explicit
    /// assignments `mul:=xyx` / `join:=x^y,meet:=xvy` covering every
    /// symbol of `sig`.
    pub fn parse(lit: &str, sig: &Signature) -> Result<Self> {
        let lit = lit.trim();
        if let Some(k) = lit.strip_prefix('s').and_then(|d| d.parse::<usize>().ok()) {
            let s = Hypersubstitution::band_sigma(k)?;
            if s.sig != *sig {
                return Err(Error::BadSigmaLiteral(
                    lit.into(),
                    "builtin s1..s6 are for the band signature".into(),
                ));
            }
            return Ok(s);
        }
        let mut images: Vec<Option<Term>> = vec![None; sig.len()];
        for part in lit.split(',') {
            let (name, term_text) = part.split_once(":=").ok_or_else(|| {
                Error::BadSigmaLiteral(lit.into(), format!("`{part}` is not `name:=term`"))
            })?;
            let id = sig
                .lookup(name.trim())
                .ok_or_else(|| Error::UnknownSymbol(name.trim().into()))?;
            images[id.0] = Some(parse_term(term_text, sig)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, image)| {
                image.ok_or_else(|| {
                    Error::BadSigmaLiteral(
                        lit.into(),
                        format!("no image for symbol `{}`", sig.symbol(SymbolId(i)).name),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Hypersubstitution::new(sig.clone(), images)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn image(&self, id: SymbolId) -> &Term {
        &self.images[id.0]
    }

    /// Extends the hypersubstitution to a term: variables map to
    /// themselves, and `f(p0, ..., pn)` maps to the image of `f` with
    /// the transformed arguments substituted for its variables.
    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(*v),
            Term::App(id, args) => {
                let assignment: BTreeMap<usize, Term> = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (i, self.apply(a)))
                    .collect();
                substitute(&self.images[id.0], &assignment)
            }
        }
    }

    /// The derived identity: the extension applied to both sides.
    pub fn derive_identity(&self, e: &Identity) -> Identity {
        Identity::new(self.apply(&e.lhs), self.apply(&e.rhs))
    }

    /// Composition as hypersubstitutions: `(self ∘ other)(f) =
    /// self.apply(other(f))`.
    pub fn compose(&self, other: &Hypersubstitution) -> Hypersubstitution {
        Hypersubstitution {
            sig: self.sig.clone(),
            images: other.images.iter().map(|t| self.apply(t)).collect(),
        }
    }
}

/// A decision backend for identities of a variety, together with the
/// finite enumeration of its n-generated relatively free algebras as
/// representative terms. Band varieties and lattice certificates both
/// implement this.
pub trait VarietyOracle {
    fn signature(&self) -> &Signature;

    /// Does the identity hold in the variety?
    fn holds(&self, e: &Identity) -> Result<bool>;

    /// Representative terms for the elements of the relatively free
    /// algebra on `n` generators, shortest-then-lexicographic, in a
    /// deterministic order.
    fn free_terms(&self, n: usize) -> Result<Vec<Term>>;
}

/// Two hypersubstitutions are equivalent modulo a variety when the
/// images of every symbol are equal as identities of the variety.
/// Equivalent hypersubstitutions produce the same derived variety.
pub fn equivalent(
    s1: &Hypersubstitution,
    s2: &Hypersubstitution,
    oracle: &dyn VarietyOracle,
) -> Result<bool> {
    for (id, _) in s1.signature().symbols() {
        let e = Identity::new(s1.image(id).clone(), s2.image(id).clone());
        if !oracle.holds(&e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One representative hypersubstitution per equivalence class modulo
/// the variety: every symbol ranges over the elements of the free
/// algebra on its arity. The order is the cartesian product with the
/// first symbol varying slowest.
pub fn enumerate(oracle: &dyn VarietyOracle, sig: &Signature) -> Result<Vec<Hypersubstitution>> {
    let mut choices: Vec<Vec<Term>> = Vec::new();
    for (_, sym) in sig.symbols() {
        choices.push(oracle.free_terms(sym.arity)?);
    }
    let mut result = Vec::new();
    let mut picks = vec![0usize; choices.len()];
    'outer: loop {
        let images: Vec<Term> = picks
            .iter()
            .zip(&choices)
            .map(|(&i, terms)| terms[i].clone())
            .collect();
        result.push(Hypersubstitution::new(sig.clone(), images)?);
        for i in (0..picks.len()).rev() {
            picks[i] += 1;
            if picks[i] < choices[i].len() {
                continue 'outer;
            }
            picks[i] = 0;
        }
        break;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_identity, print_term};

    fn band() -> Signature {
        Signature::band()
    }

    /// The leaf word of a band term, as letter indices.
    fn word_of(t: &Term) -> Vec<usize> {
        t.var_leaves()
    }

    fn letters(s: &str) -> Vec<usize> {
        parse_term(s, &band()).unwrap().var_leaves()
    }

    #[test]
    fn sigma5_on_binary_product() {
        let s5 = Hypersubstitution::band_sigma(5).unwrap();
        let t = parse_term("xy", &band()).unwrap();
        assert_eq!(word_of(&s5.apply(&t)), letters("xyx"));
    }

    #[test]
    fn sigma5_on_right_associated_word() {
        let s5 = Hypersubstitution::band_sigma(5).unwrap();
        let t = parse_term("zxy", &band()).unwrap();
        assert_eq!(word_of(&s5.apply(&t)), letters("zxyxz"));
    }

    #[test]
    fn trivial_hypersubstitution_fixes_terms() {
        let id = Hypersubstitution::identity(band());
        for s in ["x", "xy", "zxy", "mul(zx,y)"] {
            let t = parse_term(s, &band()).unwrap();
            assert_eq!(id.apply(&t), t);
        }
    }

    #[test]
    fn derived_identities_match_hand_computation() {
        let sig = band();
        let s5 = Hypersubstitution::band_sigma(5).unwrap();
        let cases = [
            ("xy = yx", "xyx", "yxy"),
            ("yx = yxy", "yxy", "yxyxy"),
            ("zxy = zyx", "zxyxz", "zyxyz"),
        ];
        for (identity, lhs, rhs) in cases {
            let e = parse_identity(identity, &sig).unwrap();
            let d = s5.derive_identity(&e);
            assert_eq!(word_of(&d.lhs), letters(lhs), "{identity}");
            assert_eq!(word_of(&d.rhs), letters(rhs), "{identity}");
        }
    }

    #[test]
    fn sigma6_expands_three_letter_words() {
        let sig = band();
        let s6 = Hypersubstitution::band_sigma(6).unwrap();
        let e = parse_identity("yxz = xyz", &sig).unwrap();
        // Raw derived words; band engines may simplify them further.
        let d = s6.derive_identity(&e);
        assert_eq!(word_of(&d.lhs), letters("zxzyzxz"));
        assert_eq!(word_of(&d.rhs), letters("zyzxzyz"));
    }

    #[test]
    fn images_must_fit_arity() {
        let sig = band();
        let image = parse_term("xz", &sig).unwrap();
        assert!(matches!(
            Hypersubstitution::new(sig, vec![image]),
            Err(Error::HypersubVariable { .. })
        ));
    }

    #[test]
    fn literal_parsing() {
        let sig = band();
        let s5 = Hypersubstitution::parse("s5", &sig).unwrap();
        assert_eq!(s5, Hypersubstitution::band_sigma(5).unwrap());
        let explicit = Hypersubstitution::parse("mul:=xyx", &sig).unwrap();
        assert_eq!(explicit, s5);

        let lat = Signature::lattice();
        let swap = Hypersubstitution::parse("join:=x^y,meet:=xvy", &lat).unwrap();
        assert_eq!(
            print_term(swap.image(lat.lookup("join").unwrap()), &lat),
            "x ^ y"
        );
        assert_eq!(
            print_term(swap.image(lat.lookup("meet").unwrap()), &lat),
            "x v y"
        );
        assert!(Hypersubstitution::parse("join:=x^y", &lat).is_err());
        assert!(Hypersubstitution::parse("s7", &sig).is_err());
    }

    #[test]
    fn composition_acts_like_nested_application() {
        let s4 = Hypersubstitution::band_sigma(4).unwrap();
        let s5 = Hypersubstitution::band_sigma(5).unwrap();
        let t = parse_term("zxy", &band()).unwrap();
        let composed = s4.compose(&s5);
        assert_eq!(composed.apply(&t), s4.apply(&s5.apply(&t)));
    }
}
