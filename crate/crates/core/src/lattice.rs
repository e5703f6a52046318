//! Free-lattice term comparison via Whitman's condition, dualization,
//! derived algebras of finite lattices, lattice-axiom reports, and
//! fluidity certificates for finitely generated lattice varieties.

use crate::algebra::FiniteAlgebra;
use crate::hypersub::Hypersubstitution;
use crate::term::{parse_identity, Identity, Signature, SymbolId, Term};
use crate::{Error, Result};
use std::collections::HashMap;

const JOIN: SymbolId = SymbolId(0);
const MEET: SymbolId = SymbolId(1);

/// Maximum depth accepted by [`enumerate_binary_lattice_terms`].
pub const MAX_ENUM_DEPTH: usize = 4;

enum View<'a> {
    Var(usize),
    Join(&'a Term, &'a Term),
    Meet(&'a Term, &'a Term),
}

fn view(t: &Term) -> View<'_> {
    match t {
        Term::Var(v) => View::Var(*v),
        Term::App(id, args) if *id == JOIN => View::Join(&args[0], &args[1]),
        Term::App(_, args) => View::Meet(&args[0], &args[1]),
    }
}

fn check_lattice_term(t: &Term) -> Result<()> {
    t.check_signature(&Signature::lattice())
}

/// Decides `p ≤ q` in the free lattice.
///
/// The recursion splits joins on the left and meets on the right
/// (valid in every lattice), resolves variables against joins/meets by
/// inclusion, and applies Whitman's condition for a meet below a join:
/// `a∧b ≤ c∨d` iff one of `a ≤ c∨d`, `b ≤ c∨d`, `a∧b ≤ c`, `a∧b ≤ d`.
pub fn free_lattice_leq(p: &Term, q: &Term) -> Result<bool> {
    check_lattice_term(p)?;
    check_lattice_term(q)?;
    Ok(leq(p, q))
}

pub fn free_lattice_equal(p: &Term, q: &Term) -> Result<bool> {
    Ok(free_lattice_leq(p, q)? && free_lattice_leq(q, p)?)
}

fn leq(p: &Term, q: &Term) -> bool {
    match (view(p), view(q)) {
        (View::Join(a, b), _) => leq(a, q) && leq(b, q),
        (_, View::Meet(c, d)) => leq(p, c) && leq(p, d),
        (View::Var(a), View::Var(b)) => a == b,
        (View::Var(_), View::Join(c, d)) => leq(p, c) || leq(p, d),
        (View::Meet(a, b), View::Var(_)) => leq(a, q) || leq(b, q),
        (View::Meet(a, b), View::Join(c, d)) => leq(a, q) || leq(b, q) || leq(p, c) || leq(p, d),
    }
}

/// The four pairwise inequivalent binary lattice terms.
pub fn binary_lattice_classes() -> Vec<Term> {
    vec![
        Term::Var(0),
        Term::Var(1),
        Term::App(JOIN, vec![Term::Var(0), Term::Var(1)]),
        Term::App(MEET, vec![Term::Var(0), Term::Var(1)]),
    ]
}

/// Equivalence classes of all binary lattice terms of the given depth,
/// one representative each. Free-lattice equivalence is a congruence,
/// so closing class representatives level by level covers every term.
pub fn enumerate_binary_lattice_terms(max_depth: usize) -> Result<Vec<Term>> {
    if max_depth > MAX_ENUM_DEPTH {
        return Err(Error::CapExceeded {
            what: "lattice term depth",
            requested: max_depth,
            cap: MAX_ENUM_DEPTH,
        });
    }
    let mut reps: Vec<Term> = vec![Term::Var(0), Term::Var(1)];
    for _ in 0..max_depth {
        let base = reps.clone();
        for op in [JOIN, MEET] {
            for a in &base {
                for b in &base {
                    let t = Term::App(op, vec![a.clone(), b.clone()]);
                    if !reps.iter().any(|r| free_lattice_equal(r, &t).unwrap()) {
                        reps.push(t);
                    }
                }
            }
        }
    }
    Ok(reps)
}

/// Swaps join and meet throughout; an involution.
pub fn dualize_term(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(*v),
        Term::App(id, args) => {
            let swapped = if *id == JOIN { MEET } else { JOIN };
            Term::App(swapped, args.iter().map(dualize_term).collect())
        }
    }
}

pub fn dualize_identity(e: &Identity) -> Identity {
    Identity::new(dualize_term(&e.lhs), dualize_term(&e.rhs))
}

pub fn dualize_axioms(axioms: &[Identity]) -> Vec<Identity> {
    axioms.iter().map(dualize_identity).collect()
}

/// The six lattice axioms: commutativity, associativity and absorption
/// for both operations.
pub fn lattice_axioms() -> Vec<(&'static str, Identity)> {
    let sig = Signature::lattice();
    let ax = |text: &str| parse_identity(text, &sig).unwrap();
    vec![
        ("join-commutativity", ax("x v y = y v x")),
        ("meet-commutativity", ax("x ^ y = y ^ x")),
        ("join-associativity", ax("(x v y) v z = x v (y v z)")),
        ("meet-associativity", ax("(x ^ y) ^ z = x ^ (y ^ z)")),
        ("join-absorption", ax("x v (x ^ y) = x")),
        ("meet-absorption", ax("x ^ (x v y) = x")),
    ]
}

/// Distributivity of meet over join; with the lattice axioms it
/// implies its dual.
pub fn distributivity_axiom() -> Identity {
    parse_identity("x ^ (y v z) = (x ^ y) v (x ^ z)", &Signature::lattice()).unwrap()
}

/// Per-axiom outcome of [`axiom_report`].
#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub identity: Identity,
    /// Falsifying environment, absent when the axiom passes.
    pub witness: Option<Vec<(usize, usize)>>,
}

/// Evaluates the six lattice axioms on an algebra over the `(2, 2)`
/// signature.
pub fn axiom_report(alg: &FiniteAlgebra) -> Result<Vec<AxiomCheck>> {
    if alg.signature() != &Signature::lattice() {
        return Err(Error::SignatureMismatch(
            "axiom report needs the join/meet signature".into(),
        ));
    }
    Ok(lattice_axioms()
        .into_iter()
        .map(|(name, identity)| {
            let witness = alg.satisfies_with_witness(&identity);
            AxiomCheck {
                name,
                identity,
                witness,
            }
        })
        .collect())
}

/// A finite algebra over the `(2, 2)` signature that passes all six
/// lattice axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeModel {
    pub name: String,
    algebra: FiniteAlgebra,
}

impl LatticeModel {
    pub fn new(name: impl Into<String>, algebra: FiniteAlgebra) -> Result<LatticeModel> {
        let name = name.into();
        for check in axiom_report(&algebra)? {
            if check.witness.is_some() {
                return Err(Error::NotALattice(format!("`{name}` fails {}", check.name)));
            }
        }
        Ok(LatticeModel { name, algebra })
    }

    /// Parses the JSON algebra format and validates the axioms.
    pub fn from_json(name: impl Into<String>, text: &str) -> Result<LatticeModel> {
        LatticeModel::new(name, FiniteAlgebra::from_json(text)?)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    /// The dual lattice: join and meet tables exchanged.
    pub fn dual(&self) -> LatticeModel {
        let swap = Hypersubstitution::parse("join:=x^y,meet:=xvy", &Signature::lattice())
            .expect("swap literal");
        LatticeModel {
            name: format!("{}^d", self.name),
            algebra: self.algebra.derived_algebra(&swap).expect("same signature"),
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.algebra.op(JOIN, &[a, b]) == b
    }
}

/// Builtin models: `chain2`, `chain3`, `chain4`, `M3` (the diamond),
/// `N5` (the pentagon).
pub fn builtin_model(name: &str) -> Result<LatticeModel> {
    match name {
        "chain2" => chain(2),
        "chain3" => chain(3),
        "chain4" => chain(4),
        // 0 < a,b,c < 1 with incomparable atoms
        "M3" => from_order("M3", 5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]),
        // 0 < a < b < 1 and 0 < c < 1, c incomparable to a and b
        "N5" => from_order("N5", 5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]),
        _ => Err(Error::UnknownVariety(name.to_string())),
    }
}

pub const BUILTIN_MODELS: [&str; 5] = ["chain2", "chain3", "chain4", "M3", "N5"];

fn chain(n: usize) -> Result<LatticeModel> {
    let alg = FiniteAlgebra::from_fn(Signature::lattice(), n, |id, t| {
        if id == JOIN {
            t[0].max(t[1])
        } else {
            t[0].min(t[1])
        }
    })?;
    LatticeModel::new(format!("chain{n}"), alg)
}

/// Builds a lattice from the covering pairs of its order.
fn from_order(name: &str, n: usize, covers: &[(usize, usize)]) -> Result<LatticeModel> {
    let mut leq = vec![false; n * n];
    for e in 0..n {
        leq[e * n + e] = true;
    }
    // transitive closure of the covers
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in covers {
            for c in 0..n {
                if leq[b * n + c] && !leq[a * n + c] {
                    leq[a * n + c] = true;
                    changed = true;
                }
            }
        }
    }
    let bound = |a: usize, b: usize, upper: bool| -> usize {
        let is_bound = |c: usize| {
            if upper {
                leq[a * n + c] && leq[b * n + c]
            } else {
                leq[c * n + a] && leq[c * n + b]
            }
        };
        let extremal = |c: usize| {
            (0..n).filter(|&d| is_bound(d)).all(|d| {
                if upper {
                    leq[c * n + d]
                } else {
                    leq[d * n + c]
                }
            })
        };
        (0..n)
            .find(|&c| is_bound(c) && extremal(c))
            .expect("builtin orders are lattices")
    };
    let alg = FiniteAlgebra::from_fn(Signature::lattice(), n, |id, t| {
        bound(t[0], t[1], id == JOIN)
    })?;
    LatticeModel::new(name, alg)
}

// ---------------------------------------------------------------------------
// Fluidity certificates

/// Verdict for one of the sixteen hypersubstitution classes over the
/// four binary lattice-term classes.
#[derive(Debug, Clone)]
pub enum SigmaVerdict {
    /// Equivalent to the trivial hypersubstitution modulo the variety:
    /// the derived variety is the variety itself.
    EqualsVariety,
    /// Equivalent to the join/meet swap: the derived variety is the
    /// dual variety, equal to the variety since the generators are
    /// closed under dual isomorphism.
    DualSelfdual,
    /// Equivalent to the swap, but the generator set is not closed
    /// under dual isomorphism; inclusion of the dual variety is left
    /// unresolved rather than guessed.
    DualUnresolved,
    /// The derived variety falls outside the variety: the named axiom
    /// fails in the derived algebra of the named generator.
    NotIncluded {
        generator: String,
        axiom_name: String,
        witness: Vec<(usize, usize)>,
    },
    /// Every axiom survives derivation, so the derived variety is
    /// included without being recognized as the variety itself; counts
    /// towards the certificate dimension.
    IncludedProper,
}

#[derive(Debug, Clone)]
pub struct SigmaReport {
    /// Images of join and meet.
    pub sigma: (Term, Term),
    pub verdict: SigmaVerdict,
}

#[derive(Debug)]
pub struct FluidityReport {
    /// Count of `IncludedProper` verdicts; 0 certifies fluidity
    /// relative to the certificate.
    pub dimension: usize,
    pub entries: Vec<SigmaReport>,
}

/// Classifies all sixteen hypersubstitution classes for the variety
/// `HSP(generators) = Mod(axioms)`. The caller asserts that equality;
/// the generators are checked against the axioms, and identities of
/// the variety are decided on the generators.
pub fn fluidity_certificate(
    generators: &[LatticeModel],
    axioms: &[(String, Identity)],
    iso_cap: usize,
) -> Result<FluidityReport> {
    let sig = Signature::lattice();
    for g in generators {
        for (name, axiom) in axioms {
            if !g.algebra.satisfies(axiom) {
                return Err(Error::InconsistentCertificate {
                    generator: g.name.clone(),
                    axiom: name.clone(),
                });
            }
        }
    }
    let classes = binary_lattice_classes();
    let holds_in_all = |e: &Identity| generators.iter().all(|g| g.algebra.satisfies(e));

    // closure of the generator set under dual isomorphism
    let mut selfdual = true;
    'dual: for g in generators {
        let dual = g.dual();
        for h in generators {
            if h.algebra
                .isomorphic_capped(&dual.algebra, iso_cap)?
                .is_some()
            {
                continue 'dual;
            }
        }
        selfdual = false;
        break;
    }

    let join_var = Term::App(JOIN, vec![Term::Var(0), Term::Var(1)]);
    let meet_var = Term::App(MEET, vec![Term::Var(0), Term::Var(1)]);
    let mut entries = Vec::new();
    let mut dimension = 0;
    for join_image in &classes {
        for meet_image in &classes {
            let sigma =
                Hypersubstitution::new(sig.clone(), vec![join_image.clone(), meet_image.clone()])?;
            let acts_as = |jt: &Term, mt: &Term| {
                holds_in_all(&Identity::new(join_image.clone(), jt.clone()))
                    && holds_in_all(&Identity::new(meet_image.clone(), mt.clone()))
            };
            let verdict = if acts_as(&join_var, &meet_var) {
                SigmaVerdict::EqualsVariety
            } else if acts_as(&meet_var, &join_var) {
                if selfdual {
                    SigmaVerdict::DualSelfdual
                } else {
                    SigmaVerdict::DualUnresolved
                }
            } else {
                let mut failure = None;
                'search: for g in generators {
                    let derived = g.algebra.derived_algebra(&sigma)?;
                    for (name, axiom) in axioms {
                        if let Some(witness) = derived.satisfies_with_witness(axiom) {
                            failure = Some(SigmaVerdict::NotIncluded {
                                generator: g.name.clone(),
                                axiom_name: name.clone(),
                                witness,
                            });
                            break 'search;
                        }
                    }
                }
                failure.unwrap_or(SigmaVerdict::IncludedProper)
            };
            if matches!(verdict, SigmaVerdict::IncludedProper) {
                dimension += 1;
            }
            entries.push(SigmaReport {
                sigma: (join_image.clone(), meet_image.clone()),
                verdict,
            });
        }
    }
    Ok(FluidityReport { dimension, entries })
}

/// The named lattice axioms, as certificate input.
pub fn named_lattice_axioms() -> Vec<(String, Identity)> {
    lattice_axioms()
        .into_iter()
        .map(|(n, e)| (n.to_string(), e))
        .collect()
}

/// Representative terms of the free algebra on `n` generators of
/// `HSP(models)`: closure of the projections under pointwise join and
/// meet across all models, with breadth-first term representatives.
pub fn generated_free_terms(models: &[LatticeModel], n: usize) -> Result<Vec<Term>> {
    if models.is_empty() {
        return Err(Error::InconsistentCertificate {
            generator: "(none)".into(),
            axiom: "a generated variety needs at least one model".into(),
        });
    }
    // an element is its tuple of term functions: one valuation per
    // model over all n-tuples of model elements
    let valuation = |t: &Term| -> Vec<usize> {
        let mut vals = Vec::new();
        for m in models {
            crate::algebra::for_each_tuple(m.size(), n, |env| {
                vals.push(eval_lattice(m.algebra(), t, env));
                true
            });
        }
        vals
    };
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut reps: Vec<Term> = Vec::new();
    for g in 0..n {
        let t = Term::Var(g);
        index.insert(valuation(&t), reps.len());
        reps.push(t);
    }
    let mut processed = 0;
    while processed < reps.len() {
        let upto = reps.len();
        for op in [JOIN, MEET] {
            for i in 0..upto {
                for j in 0..upto {
                    if i < processed && j < processed {
                        continue;
                    }
                    let t = Term::App(op, vec![reps[i].clone(), reps[j].clone()]);
                    if let std::collections::hash_map::Entry::Vacant(slot) =
                        index.entry(valuation(&t))
                    {
                        slot.insert(reps.len());
                        reps.push(t);
                    }
                }
            }
        }
        processed = upto;
    }
    Ok(reps)
}

fn eval_lattice(alg: &FiniteAlgebra, t: &Term, env: &[usize]) -> usize {
    match t {
        Term::Var(v) => env[*v],
        Term::App(id, args) => {
            let a = eval_lattice(alg, &args[0], env);
            let b = eval_lattice(alg, &args[1], env);
            alg.op(*id, &[a, b])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_term, print_term};

    fn t(s: &str) -> Term {
        parse_term(s, &Signature::lattice()).unwrap()
    }

    #[test]
    fn whitman_decides_basic_equalities() {
        assert!(free_lattice_equal(&t("x v y"), &t("y v x")).unwrap());
        assert!(free_lattice_equal(&t("x v (x ^ y)"), &t("x")).unwrap());
        assert!(!free_lattice_equal(&t("x v y"), &t("x ^ y")).unwrap());
        assert!(free_lattice_leq(&t("x ^ y"), &t("x v y")).unwrap());
        assert!(!free_lattice_leq(&t("x v y"), &t("x ^ y")).unwrap());
        assert!(free_lattice_equal(&t("(x v y) v z"), &t("x v (y v z)")).unwrap());
        assert!(free_lattice_equal(&t("x ^ (x v y)"), &t("x")).unwrap());
    }

    #[test]
    fn four_binary_classes_at_small_depths() {
        assert_eq!(enumerate_binary_lattice_terms(0).unwrap().len(), 2);
        for depth in 1..=3 {
            let classes = enumerate_binary_lattice_terms(depth).unwrap();
            assert_eq!(classes.len(), 4, "depth {depth}");
        }
        let classes = enumerate_binary_lattice_terms(1).unwrap();
        let printed: Vec<String> = classes
            .iter()
            .map(|c| print_term(c, &Signature::lattice()))
            .collect();
        assert_eq!(printed, vec!["x", "y", "x v y", "x ^ y"]);
        assert!(enumerate_binary_lattice_terms(5).is_err());
    }

    #[test]
    fn dualize_is_an_involution() {
        let term = t("x v (y ^ z)");
        assert_eq!(
            print_term(&dualize_term(&term), &Signature::lattice()),
            "x ^ (y v z)"
        );
        assert_eq!(dualize_term(&dualize_term(&term)), term);
        let absorption = parse_identity("x v (x ^ y) = x", &Signature::lattice()).unwrap();
        let dual = dualize_identity(&absorption);
        assert_eq!(
            dual.display(&Signature::lattice()).to_string(),
            "x ^ (x v y) = x"
        );
    }

    #[test]
    fn builtin_models_are_lattices() {
        for name in BUILTIN_MODELS {
            let m = builtin_model(name).unwrap();
            assert!(axiom_report(m.algebra())
                .unwrap()
                .iter()
                .all(|c| c.witness.is_none()));
        }
        assert_eq!(builtin_model("chain3").unwrap().size(), 3);
        assert_eq!(builtin_model("M3").unwrap().size(), 5);
    }

    #[test]
    fn n5_is_the_pentagon() {
        let n5 = builtin_model("N5").unwrap();
        // 0 < 1 < 2 < 4 and 0 < 3 < 4; 3 incomparable to 1 and 2
        assert!(n5.leq(1, 2));
        assert!(!n5.leq(1, 3) && !n5.leq(3, 1));
        assert!(!n5.algebra().satisfies(&distributivity_axiom()));
        assert!(builtin_model("chain4")
            .unwrap()
            .algebra()
            .satisfies(&distributivity_axiom()));
    }

    #[test]
    fn swap_derives_the_dual_and_projection_breaks_commutativity() {
        let chain2 = builtin_model("chain2").unwrap();
        let sig = Signature::lattice();
        let swap = Hypersubstitution::parse("join:=x^y,meet:=xvy", &sig).unwrap();
        let derived = chain2.algebra().derived_algebra(&swap).unwrap();
        assert!(axiom_report(&derived)
            .unwrap()
            .iter()
            .all(|c| c.witness.is_none()));
        assert!(derived
            .isomorphic(chain2.dual().algebra())
            .unwrap()
            .is_some());

        let proj = Hypersubstitution::parse("join:=x,meet:=x^y", &sig).unwrap();
        let derived = chain2.algebra().derived_algebra(&proj).unwrap();
        let report = axiom_report(&derived).unwrap();
        let comm = report
            .iter()
            .find(|c| c.name == "join-commutativity")
            .unwrap();
        assert_eq!(comm.witness, Some(vec![(0, 0), (1, 1)]));
    }

    #[test]
    fn one_element_lattice_survives_every_sigma() {
        let one = LatticeModel::new(
            "one",
            FiniteAlgebra::new(Signature::lattice(), 1, vec![vec![0], vec![0]]).unwrap(),
        )
        .unwrap();
        let report = fluidity_certificate(&[one], &named_lattice_axioms(), 64).unwrap();
        assert_eq!(report.dimension, 0);
        assert!(report
            .entries
            .iter()
            .all(|e| matches!(e.verdict, SigmaVerdict::EqualsVariety)));
    }

    #[test]
    fn certificate_rejects_non_models() {
        let chain2 = builtin_model("chain2").unwrap();
        let mut axioms = named_lattice_axioms();
        axioms.push((
            "x = y".into(),
            parse_identity("x = y", &Signature::lattice()).unwrap(),
        ));
        assert!(matches!(
            fluidity_certificate(&[chain2], &axioms, 64),
            Err(Error::InconsistentCertificate { .. })
        ));
    }

    #[test]
    fn generated_free_terms_on_two_generators() {
        // free objects on two generators collapse to the four binary
        // classes for any variety containing a nontrivial lattice
        for name in ["chain2", "N5", "M3"] {
            let m = builtin_model(name).unwrap();
            assert_eq!(generated_free_terms(&[m], 2).unwrap().len(), 4, "{name}");
        }
    }
}
