//! The sequent calculus: one logical axiom, cut, two limited exchange
//! rules, the additive and multiplicative rules, and (in projective mode)
//! right weakening. Everything operates on right-sided sequents whose
//! succedents are ordered sequences; there is no general exchange, so
//! order is part of every schema.
//!
//! The checker accepts exactly the literal rule shapes. Longer contexts
//! are folded with the par rule first, which the comma reading makes
//! semantically free. The only negation flexibility is in the logical
//! axiom and cut, where the displayed negation is matched up to negation
//! normal form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{enumerate_qstructures, random_qstructure, RandomModelConfig};
use crate::phase::QStructure;
use crate::set::ElemSet;
use crate::syntax::{sequent_valid, Assignment, Formula, Sequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleTag {
    AxId,
    AxTop,
    AxOne,
    Cut,
    Ex1,
    Ex2,
    WithR,
    Plus1,
    Plus2,
    BotR,
    TensorR,
    ParR,
    WR,
}

impl RuleTag {
    /// The twelve rules of the plain calculus, in catalog order.
    pub const PLAIN: [RuleTag; 12] = [
        RuleTag::AxId,
        RuleTag::AxTop,
        RuleTag::AxOne,
        RuleTag::Cut,
        RuleTag::Ex1,
        RuleTag::Ex2,
        RuleTag::WithR,
        RuleTag::Plus1,
        RuleTag::Plus2,
        RuleTag::BotR,
        RuleTag::TensorR,
        RuleTag::ParR,
    ];

    pub fn arity(self) -> usize {
        match self {
            RuleTag::AxId | RuleTag::AxTop | RuleTag::AxOne => 0,
            RuleTag::Ex1
            | RuleTag::Ex2
            | RuleTag::Plus1
            | RuleTag::Plus2
            | RuleTag::BotR
            | RuleTag::ParR
            | RuleTag::WR => 1,
            RuleTag::Cut | RuleTag::WithR | RuleTag::TensorR => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::AxId => "AxId",
            RuleTag::AxTop => "AxTop",
            RuleTag::AxOne => "AxOne",
            RuleTag::Cut => "Cut",
            RuleTag::Ex1 => "Ex1",
            RuleTag::Ex2 => "Ex2",
            RuleTag::WithR => "WithR",
            RuleTag::Plus1 => "Plus1",
            RuleTag::Plus2 => "Plus2",
            RuleTag::BotR => "BotR",
            RuleTag::TensorR => "TensorR",
            RuleTag::ParR => "ParR",
            RuleTag::WR => "WR",
        }
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule '{0}'")]
pub struct UnknownRule(pub String);

impl FromStr for RuleTag {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<RuleTag, UnknownRule> {
        let all = [
            RuleTag::AxId,
            RuleTag::AxTop,
            RuleTag::AxOne,
            RuleTag::Cut,
            RuleTag::Ex1,
            RuleTag::Ex2,
            RuleTag::WithR,
            RuleTag::Plus1,
            RuleTag::Plus2,
            RuleTag::BotR,
            RuleTag::TensorR,
            RuleTag::ParR,
            RuleTag::WR,
        ];
        all.into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalculusMode {
    Plain,
    /// Plain rules plus right weakening.
    Projective,
}

impl fmt::Display for CalculusMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalculusMode::Plain => write!(f, "plain"),
            CalculusMode::Projective => write!(f, "projective"),
        }
    }
}

impl FromStr for CalculusMode {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<CalculusMode, UnknownRule> {
        match s {
            "plain" => Ok(CalculusMode::Plain),
            "projective" => Ok(CalculusMode::Projective),
            other => Err(UnknownRule(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("{rule} expects {expected} premise(s), got {got}")]
    Arity {
        rule: RuleTag,
        expected: usize,
        got: usize,
    },
    #[error("{rule}: {which} must be right-sided")]
    NotRightSided { rule: RuleTag, which: String },
    #[error("{rule}: {which} must have {expected} formula(s), got {got}")]
    WrongLength {
        rule: RuleTag,
        which: String,
        expected: String,
        got: usize,
    },
    #[error("WR is only available in projective mode")]
    RequiresProjectiveMode,
    #[error("{rule}: {detail}")]
    Mismatch { rule: RuleTag, detail: String },
}

fn wrong_len(rule: RuleTag, which: &str, expected: &str, got: usize) -> StepError {
    StepError::WrongLength {
        rule,
        which: which.to_string(),
        expected: expected.to_string(),
        got,
    }
}

fn mismatch(rule: RuleTag, detail: impl Into<String>) -> StepError {
    StepError::Mismatch {
        rule,
        detail: detail.into(),
    }
}

/// Checks one rule application against its literal schema.
pub fn check_step(
    rule: RuleTag,
    premises: &[Sequent],
    conclusion: &Sequent,
    mode: CalculusMode,
) -> Result<(), StepError> {
    if rule == RuleTag::WR && mode != CalculusMode::Projective {
        return Err(StepError::RequiresProjectiveMode);
    }
    if premises.len() != rule.arity() {
        return Err(StepError::Arity {
            rule,
            expected: rule.arity(),
            got: premises.len(),
        });
    }
    if !conclusion.is_right_sided() {
        return Err(StepError::NotRightSided {
            rule,
            which: "conclusion".to_string(),
        });
    }
    for (i, p) in premises.iter().enumerate() {
        if !p.is_right_sided() {
            return Err(StepError::NotRightSided {
                rule,
                which: format!("premise {}", i + 1),
            });
        }
    }
    let c = conclusion.succedents();
    match rule {
        RuleTag::AxId => {
            if c.len() != 2 {
                return Err(wrong_len(rule, "conclusion", "2", c.len()));
            }
            if c[0].nnf() != c[1].nnf_negated() {
                return Err(mismatch(
                    rule,
                    "first formula must be the negation of the second (up to normal form)",
                ));
            }
        }
        RuleTag::AxTop => {
            if c.len() != 2 {
                return Err(wrong_len(rule, "conclusion", "2", c.len()));
            }
            if c[0] != Formula::Top {
                return Err(mismatch(rule, "first formula must be T"));
            }
        }
        RuleTag::AxOne => {
            if c.len() != 1 {
                return Err(wrong_len(rule, "conclusion", "1", c.len()));
            }
            if c[0] != Formula::One {
                return Err(mismatch(rule, "the formula must be 1"));
            }
        }
        RuleTag::Cut => {
            let p1 = premises[0].succedents();
            let p2 = premises[1].succedents();
            if p1.len() != 2 {
                return Err(wrong_len(rule, "premise 1", "2", p1.len()));
            }
            if p2.len() != 2 {
                return Err(wrong_len(rule, "premise 2", "2", p2.len()));
            }
            if c.len() != 2 {
                return Err(wrong_len(rule, "conclusion", "2", c.len()));
            }
            if p2[0].nnf() != p1[0].nnf_negated() {
                return Err(mismatch(
                    rule,
                    "premise 2 must start with the negation of premise 1's cut formula",
                ));
            }
            if c[0] != p1[1] {
                return Err(mismatch(
                    rule,
                    "conclusion's first formula must be premise 1's second formula",
                ));
            }
            if c[1] != p2[1] {
                return Err(mismatch(
                    rule,
                    "conclusion's second formula must be premise 2's second formula",
                ));
            }
        }
        RuleTag::Ex1 => {
            let p = premises[0].succedents();
            if p.len() != 2 {
                return Err(wrong_len(rule, "premise 1", "2", p.len()));
            }
            if c.len() != 2 {
                return Err(wrong_len(rule, "conclusion", "2", c.len()));
            }
            if c[0] != p[1] || c[1] != p[0] {
                return Err(mismatch(rule, "conclusion must swap the premise's formulas"));
            }
        }
        RuleTag::Ex2 => {
            let p = premises[0].succedents();
            if p.len() != 3 {
                return Err(wrong_len(rule, "premise 1", "3", p.len()));
            }
            if c.len() != 3 {
                return Err(wrong_len(rule, "conclusion", "3", c.len()));
            }
            if c[0] != p[2] || c[1] != p[1] || c[2] != p[0] {
                return Err(mismatch(
                    rule,
                    "conclusion must reverse the premise's three formulas",
                ));
            }
        }
        RuleTag::WithR => {
            let p1 = premises[0].succedents();
            let p2 = premises[1].succedents();
            if p1.len() != 2 {
                return Err(wrong_len(rule, "premise 1", "2", p1.len()));
            }
            if p2.len() != 2 {
                return Err(wrong_len(rule, "premise 2", "2", p2.len()));
            }
            if c.len() != 2 {
                return Err(wrong_len(rule, "conclusion", "2", c.len()));
            }
            if p1[1] != p2[1] {
                return Err(mismatch(rule, "premises must share the context formula"));
            }
            let expected = Formula::with(p1[0].clone(), p2[0].clone());
            if c[0] != expected {
                return Err(mismatch(
                    rule,
                    "conclusion must start with the with of the premise formulas",
                ));
            }
            if c[1] != p1[1] {
                return Err(mismatch(rule, "conclusion must keep the context formula"));
            }
        }
        RuleTag::Plus1 | RuleTag::Plus2 => {
            let p = premises[0].succedents();
            if p.len() != 2 {
                return Err(wrong_len(rule, "premise 1", "2", p.len()));
            }
            if c.len() != 2 {
                return Err(wrong_len(rule, "conclusion", "2", c.len()));
            }
            let Formula::Plus(l, r) = &c[0] else {
                return Err(mismatch(rule, "conclusion must start with a plus formula"));
            };
            let kept = if rule == RuleTag::Plus1 { &**l } else { &**r };
            let side = if rule == RuleTag::Plus1 { "left" } else { "right" };
            if kept != &p[0] {
                return Err(mismatch(
                    rule,
                    format!("the {side} disjunct must be the premise's first formula"),
                ));
            }
            if c[1] != p[1] {
                return Err(mismatch(rule, "conclusion must keep the context formula"));
            }
        }
        RuleTag::BotR => {
            let p = premises[0].succedents();
            if p.len() != 1 {
                return Err(wrong_len(rule, "premise 1", "1", p.len()));
            }
            if c.len() != 2 {
                return Err(wrong_len(rule, "conclusion", "2", c.len()));
            }
            if c[0] != Formula::neg(Formula::One) {
                return Err(mismatch(rule, "conclusion must start with ~1"));
            }
            if c[1] != p[0] {
                return Err(mismatch(rule, "conclusion must keep the premise formula"));
            }
        }
        RuleTag::TensorR => {
            let p1 = premises[0].succedents();
            let p2 = premises[1].succedents();
            if p1.len() != 2 {
                return Err(wrong_len(rule, "premise 1", "2", p1.len()));
            }
            if p2.len() != 2 {
                return Err(wrong_len(rule, "premise 2", "2", p2.len()));
            }
            if c.len() != 3 {
                return Err(wrong_len(rule, "conclusion", "3", c.len()));
            }
            // the conclusion order is context-1, context-2, tensor — exactly
            if c[0] != p1[1] {
                return Err(mismatch(
                    rule,
                    "conclusion must start with premise 1's context formula",
                ));
            }
            if c[1] != p2[1] {
                return Err(mismatch(
                    rule,
                    "conclusion's second formula must be premise 2's context formula",
                ));
            }
            let expected = Formula::tensor(p1[0].clone(), p2[0].clone());
            if c[2] != expected {
                return Err(mismatch(
                    rule,
                    "conclusion must end with the tensor of the premise formulas",
                ));
            }
        }
        RuleTag::ParR => {
            let p = premises[0].succedents();
            if p.len() < 2 {
                return Err(wrong_len(rule, "premise 1", "at least 2", p.len()));
            }
            if c.len() != p.len() - 1 {
                return Err(wrong_len(
                    rule,
                    "conclusion",
                    &format!("{}", p.len() - 1),
                    c.len(),
                ));
            }
            let expected = Formula::par(p[0].clone(), p[1].clone());
            if c[0] != expected {
                return Err(mismatch(
                    rule,
                    "conclusion must start with the par of the premise's first two formulas",
                ));
            }
            if c[1..] != p[2..] {
                return Err(mismatch(rule, "trailing context must be unchanged"));
            }
        }
        RuleTag::WR => {
            let p = premises[0].succedents();
            if p.len() != 1 {
                return Err(wrong_len(rule, "premise 1", "1", p.len()));
            }
            if c.len() != 2 {
                return Err(wrong_len(rule, "conclusion", "2", c.len()));
            }
            if c[0] != p[0] {
                return Err(mismatch(rule, "conclusion must keep the premise formula first"));
            }
        }
    }
    Ok(())
}

/// A derivation tree; each node records the rule that concludes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTree {
    pub conclusion: Sequent,
    pub rule: RuleTag,
    pub premises: Vec<ProofTree>,
}

impl ProofTree {
    pub fn leaf(rule: RuleTag, conclusion: Sequent) -> ProofTree {
        ProofTree {
            conclusion,
            rule,
            premises: Vec::new(),
        }
    }

    pub fn node(rule: RuleTag, conclusion: Sequent, premises: Vec<ProofTree>) -> ProofTree {
        ProofTree {
            conclusion,
            rule,
            premises,
        }
    }

    pub fn height(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(ProofTree::height)
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(ProofTree::node_count).sum::<usize>()
    }
}

/// A checking failure, located by the path of premise indices from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofError {
    pub path: Vec<usize>,
    pub error: StepError,
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at ")?;
        if self.path.is_empty() {
            write!(f, "root")?;
        } else {
            write!(f, "root")?;
            for i in &self.path {
                write!(f, ".{i}")?;
            }
        }
        write!(f, ": {}", self.error)
    }
}

impl std::error::Error for ProofError {}

/// Checks every node of a derivation; the error names the failing node by
/// its premise path from the root.
pub fn check_proof(tree: &ProofTree, mode: CalculusMode) -> Result<(), ProofError> {
    fn walk(tree: &ProofTree, mode: CalculusMode, path: &mut Vec<usize>) -> Result<(), ProofError> {
        let premises: Vec<Sequent> = tree.premises.iter().map(|p| p.conclusion.clone()).collect();
        check_step(tree.rule, &premises, &tree.conclusion, mode).map_err(|error| ProofError {
            path: path.clone(),
            error,
        })?;
        for (i, p) in tree.premises.iter().enumerate() {
            path.push(i);
            walk(p, mode, path)?;
            path.pop();
        }
        Ok(())
    }
    walk(tree, mode, &mut Vec::new())
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_depth: usize,
    pub mode: CalculusMode,
    /// Cut is excluded by default; when enabled, cut formulas are drawn
    /// from the goal's subformulas and their negations.
    pub allow_cut: bool,
}

impl SearchConfig {
    pub fn new(max_depth: usize, mode: CalculusMode) -> SearchConfig {
        SearchConfig {
            max_depth,
            mode,
            allow_cut: false,
        }
    }

    pub fn allow_cut(mut self, flag: bool) -> SearchConfig {
        self.allow_cut = flag;
        self
    }
}

/// Iterative-deepening backward search. The goal is right-normalized and
/// negation-normalized first; the returned tree concludes that normal form
/// and always re-checks. `None` is a search failure, not a disproof.
pub fn search(goal: &Sequent, config: &SearchConfig) -> Option<ProofTree> {
    let normalized = crate::syntax::right_normalize(goal);
    let succs: Vec<Formula> = normalized.succedents().iter().map(Formula::nnf).collect();
    let mut cuts: Vec<Formula> = Vec::new();
    if config.allow_cut {
        let mut seen = BTreeSet::new();
        for f in &succs {
            for sub in f.subformulas() {
                for cand in [sub.nnf(), sub.nnf_negated()] {
                    if seen.insert(cand.clone()) {
                        cuts.push(cand);
                    }
                }
            }
        }
    }
    for height in 1..=config.max_depth {
        if let Some(tree) = prove(&succs, height, config, &cuts) {
            return Some(tree);
        }
    }
    None
}

fn right(fs: Vec<Formula>) -> Sequent {
    Sequent::right(fs).expect("search goals are nonempty")
}

fn prove(
    goal: &[Formula],
    height: usize,
    config: &SearchConfig,
    cuts: &[Formula],
) -> Option<ProofTree> {
    if height == 0 || goal.is_empty() {
        return None;
    }
    // closing rules
    if goal.len() == 2 && matches!(goal[0], Formula::Neg(_)) && goal[0].nnf() == goal[1].nnf_negated()
    {
        return Some(ProofTree::leaf(RuleTag::AxId, right(goal.to_vec())));
    }
    if goal.len() == 1 && goal[0] == Formula::One {
        return Some(ProofTree::leaf(RuleTag::AxOne, right(goal.to_vec())));
    }
    if goal.len() == 2 && goal[0] == Formula::Top {
        return Some(ProofTree::leaf(RuleTag::AxTop, right(goal.to_vec())));
    }
    if height == 1 {
        return None;
    }
    let unary = |premise: Vec<Formula>, rule: RuleTag| -> Option<ProofTree> {
        prove(&premise, height - 1, config, cuts)
            .map(|sub| ProofTree::node(rule, right(goal.to_vec()), vec![sub]))
    };
    // par: fold the first two formulas apart
    if let Formula::Par(x, y) = &goal[0] {
        let mut premise = vec![(**x).clone(), (**y).clone()];
        premise.extend_from_slice(&goal[1..]);
        if let Some(t) = unary(premise, RuleTag::ParR) {
            return Some(t);
        }
    }
    if goal.len() == 2 {
        if let Formula::With(a, b) = &goal[0] {
            let ctx = goal[1].clone();
            let left = prove(&[(**a).clone(), ctx.clone()], height - 1, config, cuts);
            if let Some(lt) = left {
                if let Some(rt) = prove(&[(**b).clone(), ctx], height - 1, config, cuts) {
                    return Some(ProofTree::node(
                        RuleTag::WithR,
                        right(goal.to_vec()),
                        vec![lt, rt],
                    ));
                }
            }
        }
        if let Formula::Plus(a, b) = &goal[0] {
            let ctx = goal[1].clone();
            if let Some(t) = unary(vec![(**a).clone(), ctx.clone()], RuleTag::Plus1) {
                return Some(t);
            }
            if let Some(t) = unary(vec![(**b).clone(), ctx], RuleTag::Plus2) {
                return Some(t);
            }
        }
    }
    if goal.len() == 3 {
        if let Formula::Tensor(a, b) = &goal[2] {
            let p1 = vec![(**a).clone(), goal[0].clone()];
            let p2 = vec![(**b).clone(), goal[1].clone()];
            if let Some(lt) = prove(&p1, height - 1, config, cuts) {
                if let Some(rt) = prove(&p2, height - 1, config, cuts) {
                    return Some(ProofTree::node(
                        RuleTag::TensorR,
                        right(goal.to_vec()),
                        vec![lt, rt],
                    ));
                }
            }
        }
    }
    if goal.len() == 2 && goal[0] == Formula::neg(Formula::One) {
        if let Some(t) = unary(vec![goal[1].clone()], RuleTag::BotR) {
            return Some(t);
        }
    }
    if goal.len() == 2 {
        if let Some(t) = unary(vec![goal[1].clone(), goal[0].clone()], RuleTag::Ex1) {
            return Some(t);
        }
    }
    if goal.len() == 3 {
        let premise = vec![goal[2].clone(), goal[1].clone(), goal[0].clone()];
        if let Some(t) = unary(premise, RuleTag::Ex2) {
            return Some(t);
        }
    }
    if config.mode == CalculusMode::Projective && goal.len() == 2 {
        if let Some(t) = unary(vec![goal[0].clone()], RuleTag::WR) {
            return Some(t);
        }
    }
    if config.allow_cut && goal.len() == 2 {
        for a in cuts {
            let p1 = vec![a.clone(), goal[0].clone()];
            let p2 = vec![a.nnf_negated(), goal[1].clone()];
            if let Some(lt) = prove(&p1, height - 1, config, cuts) {
                if let Some(rt) = prove(&p2, height - 1, config, cuts) {
                    return Some(ProofTree::node(
                        RuleTag::Cut,
                        right(goal.to_vec()),
                        vec![lt, rt],
                    ));
                }
            }
        }
    }
    None
}

/// Which structures the harness samples from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelPolicy {
    /// Projective structures when the mode is projective or the rule is
    /// the weakening rule; unconstrained otherwise.
    Auto,
    Projective,
    Unconstrained,
}

impl FromStr for ModelPolicy {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<ModelPolicy, UnknownRule> {
        match s {
            "auto" => Ok(ModelPolicy::Auto),
            "projective" => Ok(ModelPolicy::Projective),
            "unconstrained" => Ok(ModelPolicy::Unconstrained),
            other => Err(UnknownRule(other.to_string())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub trials: u64,
    pub mode: CalculusMode,
    pub models: ModelPolicy,
    pub seed: u64,
}

impl HarnessConfig {
    pub fn new(trials: u64, mode: CalculusMode, seed: u64) -> HarnessConfig {
        HarnessConfig {
            trials,
            mode,
            models: ModelPolicy::Auto,
            seed,
        }
    }

    pub fn models(mut self, policy: ModelPolicy) -> HarnessConfig {
        self.models = policy;
        self
    }
}

/// A trial where every premise was valid but the conclusion was not,
/// with everything needed to replay it.
#[derive(Debug, Clone)]
pub struct HarnessViolation {
    pub trial: u64,
    pub structure: QStructure,
    pub assignment: BTreeMap<String, ElemSet>,
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
}

#[derive(Debug, Clone)]
pub struct HarnessReport {
    pub rule: RuleTag,
    pub mode: CalculusMode,
    pub seed: u64,
    pub trials: u64,
    /// Trials skipped because not all premises were valid.
    pub vacuous: u64,
    /// Trials where all premises held and the conclusion was checked.
    pub checked: u64,
    pub violations: Vec<HarnessViolation>,
}

impl HarnessReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for HarnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "rule {} ({} mode, seed {}): {} trials, {} vacuous, {} checked, {} violation(s)",
            self.rule,
            self.mode,
            self.seed,
            self.trials,
            self.vacuous,
            self.checked,
            self.violations.len()
        )?;
        for v in self.violations.iter().take(3) {
            writeln!(f, "violation at trial {}:", v.trial)?;
            write!(f, "{}", v.structure)?;
            for (atom, set) in &v.assignment {
                writeln!(f, "  {atom} := {}", v.structure.format_set(*set))?;
            }
            for p in &v.premises {
                writeln!(f, "  premise     {p}")?;
            }
            writeln!(f, "  conclusion  {}", v.conclusion)?;
        }
        Ok(())
    }
}

struct FormulaGen<'r> {
    rng: &'r mut ChaCha8Rng,
}

impl FormulaGen<'_> {
    const ATOMS: [&'static str; 4] = ["a", "b", "c", "d"];

    fn formula(&mut self, depth: usize) -> Formula {
        let leaf = depth == 0 || self.rng.gen_bool(0.6);
        if leaf {
            match self.rng.gen_range(0..6) {
                0..=3 => Formula::atom(Self::ATOMS[self.rng.gen_range(0..Self::ATOMS.len())]),
                4 => Formula::One,
                _ => Formula::Top,
            }
        } else {
            let l = self.formula(depth - 1);
            match self.rng.gen_range(0..5) {
                0 => Formula::neg(l),
                1 => Formula::tensor(l, self.formula(depth - 1)),
                2 => Formula::par(l, self.formula(depth - 1)),
                3 => Formula::with(l, self.formula(depth - 1)),
                _ => Formula::plus(l, self.formula(depth - 1)),
            }
        }
    }
}

/// Premise and conclusion sequents shaped like one application of the rule,
/// with freshly sampled formulas.
fn rule_instance(rule: RuleTag, gen: &mut FormulaGen<'_>) -> (Vec<Sequent>, Sequent) {
    let mut f = |d: usize| gen.formula(d);
    let (premises, conclusion): (Vec<Vec<Formula>>, Vec<Formula>) = match rule {
        RuleTag::AxId => {
            let a = f(2);
            (vec![], vec![Formula::neg(a.clone()), a])
        }
        RuleTag::AxTop => (vec![], vec![Formula::Top, f(2)]),
        RuleTag::AxOne => (vec![], vec![Formula::One]),
        RuleTag::Cut => {
            let (a, b, c) = (f(1), f(1), f(1));
            (
                vec![
                    vec![a.clone(), b.clone()],
                    vec![Formula::neg(a), c.clone()],
                ],
                vec![b, c],
            )
        }
        RuleTag::Ex1 => {
            let (x, y) = (f(1), f(1));
            (vec![vec![x.clone(), y.clone()]], vec![y, x])
        }
        RuleTag::Ex2 => {
            let (x, y, z) = (f(1), f(1), f(1));
            (
                vec![vec![x.clone(), y.clone(), z.clone()]],
                vec![z, y, x],
            )
        }
        RuleTag::WithR => {
            let (a, b, c) = (f(1), f(1), f(1));
            (
                vec![vec![a.clone(), c.clone()], vec![b.clone(), c.clone()]],
                vec![Formula::with(a, b), c],
            )
        }
        RuleTag::Plus1 => {
            let (a, b, c) = (f(1), f(1), f(1));
            (
                vec![vec![a.clone(), c.clone()]],
                vec![Formula::plus(a, b), c],
            )
        }
        RuleTag::Plus2 => {
            let (a, b, c) = (f(1), f(1), f(1));
            (
                vec![vec![a.clone(), c.clone()]],
                vec![Formula::plus(b, a), c],
            )
        }
        RuleTag::BotR => {
            let a = f(2);
            (
                vec![vec![a.clone()]],
                vec![Formula::neg(Formula::One), a],
            )
        }
        RuleTag::TensorR => {
            let (a, b, c, d) = (f(1), f(1), f(1), f(1));
            (
                vec![vec![a.clone(), c.clone()], vec![b.clone(), d.clone()]],
                vec![c, d, Formula::tensor(a, b)],
            )
        }
        RuleTag::ParR => {
            let (a, b) = (f(1), f(1));
            let trailing: Vec<Formula> = (0..gen.rng.gen_range(0..=2)).map(|_| gen.formula(1)).collect();
            let mut premise = vec![a.clone(), b.clone()];
            premise.extend(trailing.iter().cloned());
            let mut conclusion = vec![Formula::par(a, b)];
            conclusion.extend(trailing);
            (vec![premise], conclusion)
        }
        RuleTag::WR => {
            let (a, b) = (f(2), f(2));
            (vec![vec![a.clone()]], vec![a, b])
        }
    };
    (
        premises.into_iter().map(right).collect(),
        right(conclusion),
    )
}

/// Builds the harness model pool: every enumerable structure up to size 3
/// plus seeded random structures of sizes 4 and 5.
pub fn harness_pool(projective_only: bool, seed: u64) -> Vec<QStructure> {
    let mut pool = Vec::new();
    for n in 1..=3 {
        pool.extend(
            enumerate_qstructures(n)
                .expect("sizes up to 3 are enumerable")
                .filter(|q| !projective_only || q.is_projective()),
        );
    }
    let mut sub = 0u64;
    for size in [4usize, 5] {
        for _ in 0..8 {
            let cfg = RandomModelConfig::new(size).projective(projective_only);
            if let Ok(s) = random_qstructure(&cfg, seed.wrapping_add(sub).wrapping_mul(2654435769))
            {
                pool.push(s.structure);
            }
            sub += 1;
        }
    }
    pool
}

/// Samples rule-shaped premise/conclusion pairs against random models and
/// assignments; whenever every premise is valid, the conclusion must be.
pub fn soundness_harness(rule: RuleTag, config: &HarnessConfig) -> HarnessReport {
    let projective_models = match config.models {
        ModelPolicy::Projective => true,
        ModelPolicy::Unconstrained => false,
        ModelPolicy::Auto => config.mode == CalculusMode::Projective || rule == RuleTag::WR,
    };
    let pool = harness_pool(projective_models, config.seed);
    let fact_cache: Vec<Vec<ElemSet>> = pool
        .iter()
        .map(|q| q.all_facts().iter().map(|f| f.set()).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = HarnessReport {
        rule,
        mode: config.mode,
        seed: config.seed,
        trials: config.trials,
        vacuous: 0,
        checked: 0,
        violations: Vec::new(),
    };
    for trial in 0..config.trials {
        let model_idx = rng.gen_range(0..pool.len());
        let q = &pool[model_idx];
        let facts = &fact_cache[model_idx];
        let (premises, conclusion) = rule_instance(rule, &mut FormulaGen { rng: &mut rng });
        let mut atoms: BTreeSet<String> = conclusion.atoms();
        for p in &premises {
            atoms.extend(p.atoms());
        }
        let mut asg = Assignment::new(q);
        for atom in &atoms {
            let set = facts[rng.gen_range(0..facts.len())];
            asg.bind(atom.clone(), set).expect("all_facts yields facts");
        }
        let premises_valid = premises
            .iter()
            .all(|p| sequent_valid(&asg, p).expect("atoms are bound"));
        if !premises_valid {
            report.vacuous += 1;
            continue;
        }
        report.checked += 1;
        if !sequent_valid(&asg, &conclusion).expect("atoms are bound") {
            report.violations.push(HarnessViolation {
                trial,
                structure: q.clone(),
                assignment: asg.bindings().map(|(k, v)| (k.to_string(), v)).collect(),
                premises,
                conclusion,
            });
        }
    }
    report
}
