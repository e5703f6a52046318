//! The subvarieties of regular bands as first-class objects: the
//! containment lattice, derived-variety identification, the dimension
//! invariant, and solid/fluid/prefluid/minimal classification.
//!
//! The registry carries the thirteen varieties between the trivial
//! variety `T` and the regular bands `RegB`, plus the variety `B` of
//! all bands outside that sublattice. Each is `Mod(band axioms + one
//! extra identity)`; identities are decided in cached relatively free
//! algebras.
//!
//! A derived variety is identified twice, through independent routes:
//! once by testing the derived axioms of every registry candidate in
//! the source variety and taking the least candidate, and once by
//! deriving the relatively free algebra on three generators and
//! checking exhaustively which registry axioms the derived tables
//! satisfy. Any disagreement is a hard error.

use crate::band::{
    self, flatten, unflatten, BandAxioms, FastVariety, FreeAlgebra, HoldsFailure, Word,
};
use crate::hypersub::{enumerate, Hypersubstitution, VarietyOracle};
use crate::lattice::{
    binary_lattice_classes, free_lattice_equal, generated_free_terms, LatticeModel,
};
use crate::term::{Identity, Signature, SymbolId, Term};
use crate::{Error, Result};
use serde::Serialize;
use std::sync::{Arc, LazyLock, OnceLock};

/// Definitions of the registry varieties: name, extra axioms on top of
/// the band axioms, fast canonical key when one exists, and whether
/// the variety belongs to the thirteen-element sublattice under RegB.
const DEFINITIONS: &[(&str, &[&str], Option<FastVariety>, bool)] = &[
    ("T", &["x = y"], None, true),
    ("LZ", &["yx = y"], Some(FastVariety::Lz), true),
    ("RZ", &["xy = y"], Some(FastVariety::Rz), true),
    ("SL", &["xy = yx"], Some(FastVariety::Sl), true),
    ("RB", &["y = yxy"], Some(FastVariety::Rb), true),
    ("V1", &["zxy = zyx"], Some(FastVariety::V1), true),
    ("V2", &["yxz = xyz"], Some(FastVariety::V2), true),
    ("V3", &["yx = yxy"], Some(FastVariety::V3), true),
    ("V4", &["xy = yxy"], Some(FastVariety::V4), true),
    ("V5", &["zxy = zxzy"], None, true),
    ("V6", &["yxz = yzxz"], None, true),
    ("NB", &["zxyz = zyxz"], Some(FastVariety::Nb), true),
    ("RegB", &["zxyz = zxzyz"], Some(FastVariety::RegB), true),
    ("B", &[], None, false),
];

const MAX_CACHED_GENERATORS: usize = 3;

/// A band variety of the registry with its decision backend.
pub struct Variety {
    name: &'static str,
    axiom_texts: Vec<&'static str>,
    axioms: BandAxioms,
    fast: Option<FastVariety>,
    in_sublattice: bool,
    cap: usize,
    free_cache: [OnceLock<Arc<FreeAlgebra>>; MAX_CACHED_GENERATORS + 1],
    report_cache: OnceLock<Result<DerivationReport>>,
}

impl Variety {
    pub fn name(&self) -> &str {
        self.name
    }

    pub fn axioms(&self) -> &BandAxioms {
        &self.axioms
    }

    pub fn axiom_texts(&self) -> &[&'static str] {
        &self.axiom_texts
    }

    pub fn fast_variety(&self) -> Option<FastVariety> {
        self.fast
    }

    /// Member of the thirteen-element sublattice under RegB (only `B`
    /// is not).
    pub fn in_sublattice(&self) -> bool {
        self.in_sublattice
    }

    /// The relatively free algebra on `n` generators, cached for
    /// `n ≤ 3`.
    pub fn free_algebra(&self, n: usize) -> Result<Arc<FreeAlgebra>> {
        if n == 0 || n > self.cap {
            return Err(Error::CapExceeded {
                what: "free-algebra generators",
                requested: n,
                cap: self.cap,
            });
        }
        if n <= MAX_CACHED_GENERATORS {
            if let Some(cached) = self.free_cache[n].get() {
                return Ok(Arc::clone(cached));
            }
            let built = Arc::new(band::free_algebra(&self.axioms, n, self.cap)?);
            return Ok(Arc::clone(self.free_cache[n].get_or_init(|| built)));
        }
        Ok(Arc::new(band::free_algebra(&self.axioms, n, self.cap)?))
    }

    /// Does the identity hold in this variety?
    pub fn holds(&self, e: &Identity) -> Result<bool> {
        Ok(self.holds_with_witness(e)?.is_none())
    }

    pub fn holds_with_witness(&self, e: &Identity) -> Result<Option<HoldsFailure>> {
        let (u, v) = band::flatten_identity(e)?;
        self.holds_words(&u, &v)
    }

    pub fn holds_words(&self, u: &Word, v: &Word) -> Result<Option<HoldsFailure>> {
        let k = band::identity_letters(u, v).len();
        if k > self.cap {
            return Err(Error::CapExceeded {
                what: "identity variables",
                requested: k,
                cap: self.cap,
            });
        }
        let free = self.free_algebra(k)?;
        band::decide_in_free(&free, u, v)
    }
}

impl VarietyOracle for Variety {
    fn signature(&self) -> &Signature {
        static BAND: LazyLock<Signature> = LazyLock::new(Signature::band);
        &BAND
    }

    fn holds(&self, e: &Identity) -> Result<bool> {
        Variety::holds(self, e)
    }

    fn free_terms(&self, n: usize) -> Result<Vec<Term>> {
        let free = self.free_algebra(n)?;
        let mut words: Vec<&Word> = free.words.iter().collect();
        words.sort_by_key(|w| (w.len(), w.letters().to_vec()));
        Ok(words.into_iter().map(unflatten).collect())
    }
}

/// A lattice variety usable as an oracle: the variety of all lattices,
/// decided in the free lattice, or `HSP` of finitely many models.
pub struct LatticeVariety {
    pub name: String,
    models: Option<Vec<LatticeModel>>,
}

impl LatticeVariety {
    /// The variety of all lattices.
    pub fn all() -> LatticeVariety {
        LatticeVariety {
            name: "L".into(),
            models: None,
        }
    }

    pub fn generated(name: impl Into<String>, models: Vec<LatticeModel>) -> LatticeVariety {
        LatticeVariety {
            name: name.into(),
            models: Some(models),
        }
    }
}

impl VarietyOracle for LatticeVariety {
    fn signature(&self) -> &Signature {
        static LATTICE: LazyLock<Signature> = LazyLock::new(Signature::lattice);
        &LATTICE
    }

    fn holds(&self, e: &Identity) -> Result<bool> {
        match &self.models {
            None => free_lattice_equal(&e.lhs, &e.rhs),
            Some(models) => Ok(models.iter().all(|m| m.algebra().satisfies(e))),
        }
    }

    fn free_terms(&self, n: usize) -> Result<Vec<Term>> {
        match &self.models {
            Some(models) => generated_free_terms(models, n),
            None => match n {
                1 => Ok(vec![Term::Var(0)]),
                2 => Ok(binary_lattice_classes()),
                _ => Err(Error::CapExceeded {
                    what: "free-lattice generators (free lattices on three or more are infinite)",
                    requested: n,
                    cap: 2,
                }),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Reports

/// Identification of one derived variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaOutcome {
    /// Builtin name of the hypersubstitution class, `s1`..`s6`.
    #[serde(rename = "sigma_class")]
    pub sigma: String,
    /// The image of multiplication, as a word.
    pub image: String,
    /// Registry name of the derived variety; absent when it leaves the
    /// registry (a derived band axiom fails).
    pub target: Option<String>,
    pub proper: bool,
    pub included: bool,
    /// Diagnostic for out-of-registry targets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Per-variety derivation report; the dimension is the number of
/// distinct proper derived varieties included in the variety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationReport {
    pub variety: String,
    pub dimension: usize,
    /// Every per-class target was identified inside the registry.
    pub complete: bool,
    pub entries: Vec<SigmaOutcome>,
}

impl DerivationReport {
    /// Distinct in-registry targets, in entry order.
    pub fn derived_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for entry in &self.entries {
            if let Some(t) = &entry.target {
                if !names.contains(t) {
                    names.push(t.clone());
                }
            }
        }
        names
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub variety: String,
    pub dimension: usize,
    pub solid: bool,
    pub fluid: bool,
    pub prefluid: bool,
    /// Exactly one proper subvariety within the registry, namely `T`.
    pub minimal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperassocFailure {
    pub sigma: String,
    pub lhs: String,
    pub rhs: String,
    pub lhs_value: String,
    pub rhs_value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperassocReport {
    pub variety: String,
    pub hyperassociative: bool,
    pub failures: Vec<HyperassocFailure>,
}

/// The Hasse diagram of the thirteen-element sublattice.
#[derive(Debug, Clone, Serialize)]
pub struct VarietyLattice {
    /// Names sorted by height, then alphabetically.
    pub names: Vec<String>,
    pub heights: Vec<usize>,
    /// Cover edges `(lower, upper)`.
    pub covers: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub variety: String,
    pub height: usize,
    pub dimension: usize,
    pub derived_set: Vec<String>,
    pub solid: bool,
    pub fluid: bool,
    pub prefluid: bool,
    pub minimal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionTable {
    pub varieties: Vec<TableRow>,
}

/// Result of identifying one derived variety.
pub enum DerivedTarget<'r> {
    Registry(&'r Variety),
    /// The derived variety is not a band variety: a derived band axiom
    /// fails in the source variety. Carries the failing derived
    /// identity and its two distinct values in the relatively free
    /// algebra.
    Outside {
        derived_identity: Identity,
        failure: HoldsFailure,
    },
}

// ---------------------------------------------------------------------------
// The registry

pub struct Registry {
    varieties: Vec<Variety>,
}

static SHARED: LazyLock<Registry> =
    LazyLock::new(|| Registry::new().expect("registry construction and verification"));

/// The shared verified registry.
pub fn shared() -> &'static Registry {
    &SHARED
}

impl Registry {
    /// Builds the registry and verifies its structural assumptions:
    /// every sublattice variety is contained in RegB, and all six
    /// derived associativity identities hold in RegB.
    pub fn new() -> Result<Registry> {
        Registry::with_cap(MAX_CACHED_GENERATORS)
    }

    pub fn with_cap(cap: usize) -> Result<Registry> {
        let varieties = DEFINITIONS
            .iter()
            .map(|(name, texts, fast, in_sub)| {
                Ok(Variety {
                    name,
                    axiom_texts: texts.to_vec(),
                    axioms: BandAxioms::parse(texts)?,
                    fast: *fast,
                    in_sublattice: *in_sub,
                    cap: cap.max(MAX_CACHED_GENERATORS),
                    free_cache: Default::default(),
                    report_cache: OnceLock::new(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let registry = Registry { varieties };
        registry.verify()?;
        Ok(registry)
    }

    /// Structural verification; failure would mean the RegB axiom
    /// choice is wrong and every downstream answer suspect.
    fn verify(&self) -> Result<()> {
        let regb = self.get("RegB")?;
        for v in self.sublattice() {
            if !self.contains(regb, v)? {
                return Err(Error::CrossValidation(format!(
                    "variety {} is not contained in RegB",
                    v.name
                )));
            }
        }
        let assoc = band_associativity();
        for k in 1..=6 {
            let sigma = Hypersubstitution::band_sigma(k)?;
            if !regb.holds(&sigma.derive_identity(&assoc))? {
                return Err(Error::CrossValidation(format!(
                    "derived associativity under s{k} fails in RegB"
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&Variety> {
        self.varieties
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariety(name.to_string()))
    }

    /// All registry varieties, `B` included.
    pub fn varieties(&self) -> impl Iterator<Item = &Variety> {
        self.varieties.iter()
    }

    /// The thirteen varieties of the RegB sublattice.
    pub fn sublattice(&self) -> impl Iterator<Item = &Variety> {
        self.varieties.iter().filter(|v| v.in_sublattice)
    }

    /// Is `w` a subvariety of `v`? Decided by checking every axiom of
    /// `v` in `w`.
    pub fn contains(&self, v: &Variety, w: &Variety) -> Result<bool> {
        for axiom in v.axioms.identities() {
            if !w.holds(&axiom)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn height(&self, v: &Variety) -> Result<usize> {
        let mut below = 0;
        for w in self.sublattice() {
            if w.name != v.name && self.contains(v, w)? {
                below = below.max(1 + self.height(w)?);
            }
        }
        Ok(below)
    }

    /// The thirteen varieties by height, then name; the canonical
    /// display order.
    pub fn display_order(&self) -> Result<Vec<&Variety>> {
        let mut with_height = self
            .sublattice()
            .map(|v| Ok((self.height(v)?, v)))
            .collect::<Result<Vec<_>>>()?;
        with_height.sort_by_key(|(h, v)| (*h, v.name));
        Ok(with_height.into_iter().map(|(_, v)| v).collect())
    }

    /// Computes the Hasse diagram of the sublattice and validates it:
    /// unique top RegB, unique bottom T, and existence of all pairwise
    /// meets.
    pub fn variety_lattice(&self) -> Result<VarietyLattice> {
        let order = self.display_order()?;
        let n = order.len();
        let mut le = vec![false; n * n]; // le[i*n+j]: order[i] ⊆ order[j]
        for i in 0..n {
            for j in 0..n {
                le[i * n + j] = self.contains(order[j], order[i])?;
            }
        }
        let top: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| le[j * n + i])).collect();
        let bottom: Vec<usize> = (0..n).filter(|&i| (0..n).all(|j| le[i * n + j])).collect();
        if top != [n - 1] || order[n - 1].name != "RegB" || bottom != [0] || order[0].name != "T" {
            return Err(Error::CrossValidation(
                "sublattice top/bottom are not RegB/T".into(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                let lbs: Vec<usize> = (0..n).filter(|&k| le[k * n + i] && le[k * n + j]).collect();
                let greatest = lbs
                    .iter()
                    .filter(|&&k| lbs.iter().all(|&l| le[l * n + k]))
                    .count();
                if greatest != 1 {
                    return Err(Error::NoUniqueMinimum(
                        format!("meet of {} and {}", order[i].name, order[j].name),
                        lbs.iter()
                            .map(|&k| order[k].name)
                            .collect::<Vec<_>>()
                            .join(","),
                    ));
                }
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !le[i * n + j] {
                    continue;
                }
                let between = (0..n).any(|k| k != i && k != j && le[i * n + k] && le[k * n + j]);
                if !between {
                    covers.push((order[i].name.to_string(), order[j].name.to_string()));
                }
            }
        }
        Ok(VarietyLattice {
            names: order.iter().map(|v| v.name.to_string()).collect(),
            heights: order
                .iter()
                .map(|v| self.height(v))
                .collect::<Result<_>>()?,
            covers,
        })
    }

    /// Identifies the derived variety of `v` under `sigma`.
    ///
    /// Route one: a registry variety `W` contains the derived variety
    /// iff every derived axiom of `W` holds in `v`; the answer is the
    /// least such candidate. Route two re-identifies the answer on the
    /// derived relatively free algebra; disagreement is an internal
    /// error. When a derived band axiom fails in `v`, the derived
    /// variety is not a band variety at all and falls outside the
    /// registry.
    pub fn derived_variety<'r>(
        &'r self,
        v: &Variety,
        sigma: &Hypersubstitution,
    ) -> Result<DerivedTarget<'r>> {
        for base in [band_associativity(), band_idempotency()] {
            let derived = sigma.derive_identity(&base);
            if let Some(failure) = v.holds_with_witness(&derived)? {
                return Ok(DerivedTarget::Outside {
                    derived_identity: derived,
                    failure,
                });
            }
        }
        let mut candidates = Vec::new();
        for w in self.varieties() {
            let mut all = true;
            for axiom in w.axioms.identities() {
                if !v.holds(&sigma.derive_identity(&axiom))? {
                    all = false;
                    break;
                }
            }
            if all {
                candidates.push(w);
            }
        }
        let minimum = candidates
            .iter()
            .find(|m| {
                candidates
                    .iter()
                    .all(|w| self.contains(w, m).unwrap_or(false))
            })
            .copied()
            .ok_or_else(|| {
                Error::NoUniqueMinimum(
                    format!("derived variety of {}", v.name),
                    candidates
                        .iter()
                        .map(|w| w.name)
                        .collect::<Vec<_>>()
                        .join(","),
                )
            })?;

        // route two: exhaustive satisfaction on the derived free algebra
        let free = v.free_algebra(3)?;
        let derived_algebra = free.algebra.derived_algebra(sigma)?;
        for w in self.varieties() {
            let satisfied = w
                .axioms
                .identities()
                .iter()
                .all(|a| derived_algebra.satisfies(a));
            let expected = candidates.iter().any(|c| c.name == w.name);
            if satisfied != expected {
                return Err(Error::CrossValidation(format!(
                    "derived variety of {} under {}: candidate route says {}, derived free algebra says {} for {}",
                    v.name,
                    flatten(sigma.image(SymbolId(0)), sigma.signature())?,
                    expected,
                    satisfied,
                    w.name
                )));
            }
        }
        Ok(DerivedTarget::Registry(minimum))
    }

    /// Per-class derivation report for `v`: one entry per
    /// hypersubstitution class modulo the variety. The classes are
    /// exhaustive over all hypersubstitutions, since equivalent ones
    /// derive equal varieties.
    pub fn derivation_report(&self, v: &Variety) -> Result<DerivationReport> {
        if let Some(cached) = v.report_cache.get() {
            return cached.clone();
        }
        let report = self.build_report(v);
        v.report_cache.get_or_init(|| report).clone()
    }

    fn build_report(&self, v: &Variety) -> Result<DerivationReport> {
        let sig = Signature::band();
        let sigmas = enumerate(v, &sig)?;
        let mut entries = Vec::new();
        let mut complete = true;
        for sigma in &sigmas {
            let image = flatten(sigma.image(SymbolId(0)), &sig)?;
            let label = sigma_name(&image)?;
            match self.derived_variety(v, sigma)? {
                DerivedTarget::Registry(w) => {
                    entries.push(SigmaOutcome {
                        sigma: label,
                        image: image.to_string(),
                        target: Some(w.name.to_string()),
                        proper: w.name != v.name,
                        included: self.contains(v, w)?,
                        note: None,
                    });
                }
                DerivedTarget::Outside {
                    derived_identity,
                    failure,
                } => {
                    complete = false;
                    entries.push(SigmaOutcome {
                        sigma: label,
                        image: image.to_string(),
                        target: None,
                        // a derived band axiom fails, so the derived
                        // variety has non-band members and cannot be
                        // `v` or any subvariety of it
                        proper: true,
                        included: false,
                        note: Some(format!(
                            "outside the band world: derived identity {} fails ({} vs {})",
                            derived_identity.display(&sig),
                            failure.lhs_value,
                            failure.rhs_value
                        )),
                    });
                }
            }
        }
        let mut counted: Vec<&str> = Vec::new();
        for e in &entries {
            if let Some(t) = &e.target {
                if e.proper && e.included && !counted.contains(&t.as_str()) {
                    counted.push(t);
                }
            }
        }
        Ok(DerivationReport {
            variety: v.name.to_string(),
            dimension: counted.len(),
            complete,
            entries,
        })
    }

    /// Distinct derived varieties of `v`, in registry display order.
    pub fn derived_set(&self, v: &Variety) -> Result<Vec<String>> {
        let report = self.derivation_report(v)?;
        let mut names = report.derived_names();
        let order: Vec<String> = self
            .display_order()?
            .iter()
            .map(|v| v.name.to_string())
            .collect();
        names.sort_by_key(|n| order.iter().position(|o| o == n).unwrap_or(usize::MAX));
        Ok(names)
    }

    /// The dimension of `v`, with the per-class report carrying the
    /// witnesses.
    pub fn dimension(&self, v: &Variety) -> Result<DerivationReport> {
        self.derivation_report(v)
    }

    pub fn classify(&self, v: &Variety) -> Result<Classification> {
        let report = self.derivation_report(v)?;
        let solid = report.complete && report.entries.iter().all(|e| e.included);
        let mut proper_subs = Vec::new();
        for w in self.varieties() {
            if w.name != v.name && self.contains(v, w)? {
                proper_subs.push(w.name);
            }
        }
        Ok(Classification {
            variety: v.name.to_string(),
            dimension: report.dimension,
            solid,
            fluid: report.dimension == 0 && report.complete,
            prefluid: report.dimension == 1 && report.complete,
            minimal: proper_subs == ["T"],
        })
    }

    /// Do all six derived associativity identities hold in `v`?
    pub fn hyperassociativity_check(&self, v: &Variety) -> Result<HyperassocReport> {
        let assoc = band_associativity();
        let mut failures = Vec::new();
        for k in 1..=6 {
            let sigma = Hypersubstitution::band_sigma(k)?;
            let derived = sigma.derive_identity(&assoc);
            if let Some(failure) = v.holds_with_witness(&derived)? {
                let (lhs, rhs) = band::flatten_identity(&derived)?;
                failures.push(HyperassocFailure {
                    sigma: format!("s{k}"),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                    lhs_value: failure.lhs_value.to_string(),
                    rhs_value: failure.rhs_value.to_string(),
                });
            }
        }
        Ok(HyperassocReport {
            variety: v.name.to_string(),
            hyperassociative: failures.is_empty(),
            failures,
        })
    }

    /// Dimension table over the thirteen sublattice varieties, by
    /// height then name.
    pub fn dimension_table(&self) -> Result<DimensionTable> {
        let mut rows = Vec::new();
        for v in self.display_order()? {
            let report = self.derivation_report(v)?;
            let class = self.classify(v)?;
            rows.push(TableRow {
                variety: v.name.to_string(),
                height: self.height(v)?,
                dimension: report.dimension,
                derived_set: self.derived_set(v)?,
                solid: class.solid,
                fluid: class.fluid,
                prefluid: class.prefluid,
                minimal: class.minimal,
            });
        }
        Ok(DimensionTable { varieties: rows })
    }

    /// DOT digraph of the sublattice: solid cover edges upward, dashed
    /// labelled arrows from each variety to its proper derived
    /// varieties. Node labels carry the defining identities.
    pub fn dot(&self) -> Result<String> {
        let lattice = self.variety_lattice()?;
        let mut out = String::from("digraph varieties {\n  rankdir=BT;\n  node [shape=box];\n");
        for name in &lattice.names {
            let v = self.get(name)?;
            let label = if v.axiom_texts.is_empty() {
                v.name.to_string()
            } else {
                format!(
                    "{}: {}",
                    v.name,
                    v.axiom_texts.join(", ").replace(" = ", "≈")
                )
            };
            out.push_str(&format!("  \"{}\" [label=\"{}\"];\n", v.name, label));
        }
        for (lower, upper) in &lattice.covers {
            out.push_str(&format!("  \"{lower}\" -> \"{upper}\";\n"));
        }
        for name in &lattice.names {
            let v = self.get(name)?;
            let report = self.derivation_report(v)?;
            let mut arrows: Vec<(String, Vec<String>)> = Vec::new();
            for e in &report.entries {
                if let Some(t) = &e.target {
                    if e.proper {
                        match arrows.iter_mut().find(|(n, _)| n == t) {
                            Some((_, ss)) => ss.push(e.sigma.clone()),
                            None => arrows.push((t.clone(), vec![e.sigma.clone()])),
                        }
                    }
                }
            }
            for (target, sigmas) in arrows {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [style=dashed, constraint=false, label=\"{}\"];\n",
                    v.name,
                    target,
                    sigmas.join(",")
                ));
            }
        }
        out.push_str("}\n");
        Ok(out)
    }
}

/// `(x·y)·z ≈ x·(y·z)`.
pub fn band_associativity() -> Identity {
    let sig = Signature::band();
    crate::term::parse_identity("mul(mul(x,y),z) = mul(x,mul(y,z))", &sig).unwrap()
}

/// `x·x ≈ x`.
pub fn band_idempotency() -> Identity {
    let sig = Signature::band();
    crate::term::parse_identity("mul(x,x) = x", &sig).unwrap()
}

/// Builtin name of a binary band hypersubstitution class, from its
/// multiplication image.
fn sigma_name(image: &Word) -> Result<String> {
    let spelled = image.to_string();
    let index = ["x", "y", "xy", "yx", "xyx", "yxy"]
        .iter()
        .position(|w| *w == spelled)
        .ok_or_else(|| {
            Error::CrossValidation(format!(
                "class representative {spelled} is not one of the six binary band words"
            ))
        })?;
    Ok(format!("s{}", index + 1))
}
