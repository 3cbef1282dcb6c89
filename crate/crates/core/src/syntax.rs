//! Formula and sequent syntax: parsing, printing, negation normal form,
//! evaluation against a model, sequent validity, right-sided
//! normalization, and countermodel search.
//!
//! The grammar is ASCII: atoms `[a-z][a-z0-9_]*`, constants `1` and `T`,
//! prefix `~` binding tightest, and the infix connectives `*` (times),
//! `|` (par), `&` (with), `+` (plus) and `-o` (implication). Because the
//! multiplicatives are not associative, a chain of one repeated connective
//! associates to the left and mixing distinct connectives without
//! parentheses is a parse error rather than a precedence guess.
//!
//! `F -o G` is definitional sugar and is eliminated at construction into
//! `~F | G`. Surface negation is accepted on any formula even though the
//! proof-facing language keeps it atomic; `nnf` is the bridge.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{enumerate_qstructures, random_qstructure, RandomModelConfig};
use crate::phase::{Fact, FactError, QStructure};
use crate::set::ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Neg(Box<Formula>),
    One,
    Top,
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    With(Box<Formula>, Box<Formula>),
    Plus(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        let name = name.into();
        debug_assert!(
            !name.is_empty()
                && name.starts_with(|c: char| c.is_ascii_lowercase())
                && name
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'),
            "atom names match [a-z][a-z0-9_]*, got '{name}'"
        );
        Formula::Atom(name)
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn tensor(l: Formula, r: Formula) -> Formula {
        Formula::Tensor(Box::new(l), Box::new(r))
    }

    pub fn par(l: Formula, r: Formula) -> Formula {
        Formula::Par(Box::new(l), Box::new(r))
    }

    pub fn with(l: Formula, r: Formula) -> Formula {
        Formula::With(Box::new(l), Box::new(r))
    }

    pub fn plus(l: Formula, r: Formula) -> Formula {
        Formula::Plus(Box::new(l), Box::new(r))
    }

    /// Linear implication, desugared on the spot: `l -o r` is `~l | r`.
    pub fn limp(l: Formula, r: Formula) -> Formula {
        Formula::par(Formula::neg(l), r)
    }

    /// Negation normal form: double negations cancelled and negation pushed
    /// through the connectives by the dualities, preserving argument order.
    /// The result carries `~` only on atoms and constants.
    pub fn nnf(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::One | Formula::Top => self.clone(),
            Formula::Neg(f) => f.nnf_negated(),
            Formula::Tensor(l, r) => Formula::tensor(l.nnf(), r.nnf()),
            Formula::Par(l, r) => Formula::par(l.nnf(), r.nnf()),
            Formula::With(l, r) => Formula::with(l.nnf(), r.nnf()),
            Formula::Plus(l, r) => Formula::plus(l.nnf(), r.nnf()),
        }
    }

    /// Negation normal form of this formula's negation.
    pub fn nnf_negated(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::One | Formula::Top => Formula::neg(self.clone()),
            Formula::Neg(f) => f.nnf(),
            Formula::Tensor(l, r) => Formula::par(l.nnf_negated(), r.nnf_negated()),
            Formula::Par(l, r) => Formula::tensor(l.nnf_negated(), r.nnf_negated()),
            Formula::With(l, r) => Formula::plus(l.nnf_negated(), r.nnf_negated()),
            Formula::Plus(l, r) => Formula::with(l.nnf_negated(), r.nnf_negated()),
        }
    }

    /// Names of the atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::One | Formula::Top => {}
            Formula::Neg(f) => f.collect_atoms(out),
            Formula::Tensor(l, r)
            | Formula::Par(l, r)
            | Formula::With(l, r)
            | Formula::Plus(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Proper subformulas plus the formula itself, in preorder, first
    /// occurrence wins.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut Vec<Formula>) {
        if !out.contains(self) {
            out.push(self.clone());
        }
        match self {
            Formula::Atom(_) | Formula::One | Formula::Top => {}
            Formula::Neg(f) => f.collect_subformulas(out),
            Formula::Tensor(l, r)
            | Formula::Par(l, r)
            | Formula::With(l, r)
            | Formula::Plus(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::One => write!(f, "1"),
            Formula::Top => write!(f, "T"),
            Formula::Neg(g) => write!(f, "~{g}"),
            Formula::Tensor(l, r) => write!(f, "({l} * {r})"),
            Formula::Par(l, r) => write!(f, "({l} | {r})"),
            Formula::With(l, r) => write!(f, "({l} & {r})"),
            Formula::Plus(l, r) => write!(f, "({l} + {r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    One,
    Top,
    Tilde,
    Op(BinOp),
    LParen,
    RParen,
    Comma,
    Turnstile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Tensor,
    Par,
    With,
    Plus,
    Limp,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Tensor => "*",
            BinOp::Par => "|",
            BinOp::With => "&",
            BinOp::Plus => "+",
            BinOp::Limp => "-o",
        }
    }

    fn apply(self, l: Formula, r: Formula) -> Formula {
        match self {
            BinOp::Tensor => Formula::tensor(l, r),
            BinOp::Par => Formula::par(l, r),
            BinOp::With => Formula::with(l, r),
            BinOp::Plus => Formula::plus(l, r),
            BinOp::Limp => Formula::limp(l, r),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '~' => {
                toks.push((i, Tok::Tilde));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Op(BinOp::Tensor)));
                i += 1;
            }
            '&' => {
                toks.push((i, Tok::Op(BinOp::With)));
                i += 1;
            }
            '+' => {
                toks.push((i, Tok::Op(BinOp::Plus)));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            ',' => {
                toks.push((i, Tok::Comma));
                i += 1;
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'-') {
                    toks.push((i, Tok::Turnstile));
                    i += 2;
                } else {
                    toks.push((i, Tok::Op(BinOp::Par)));
                    i += 1;
                }
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'o') {
                    toks.push((i, Tok::Op(BinOp::Limp)));
                    i += 2;
                } else {
                    return err(i, "expected '-o'");
                }
            }
            '1' => {
                toks.push((i, Tok::One));
                i += 1;
            }
            'T' => {
                toks.push((i, Tok::Top));
                i += 1;
            }
            'a'..='z' => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Atom(text[start..i].to_string())));
            }
            _ => return err(i, format!("unexpected character '{c}'")),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    text_len: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            text_len: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.text_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// One chain of a single repeated binary connective, left-associated.
    fn chain(&mut self) -> Result<Formula, ParseError> {
        let first = self.unary()?;
        let Some(Tok::Op(op)) = self.peek().cloned() else {
            return Ok(first);
        };
        let chain_op = op;
        let mut acc = first;
        while let Some(Tok::Op(op)) = self.peek().cloned() {
            if op != chain_op {
                return err(
                    self.here(),
                    format!(
                        "mixed connectives '{}' and '{}' need parentheses",
                        chain_op.symbol(),
                        op.symbol()
                    ),
                );
            }
            self.bump();
            let rhs = self.unary()?;
            acc = chain_op.apply(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if matches!(self.peek(), Some(Tok::Tilde)) {
            self.bump();
            Ok(Formula::neg(self.unary()?))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Atom(a)) => Ok(Formula::Atom(a)),
            Some(Tok::One) => Ok(Formula::One),
            Some(Tok::Top) => Ok(Formula::Top),
            Some(Tok::LParen) => {
                let f = self.chain()?;
                let pos = self.here();
                match self.bump() {
                    Some(Tok::RParen) => Ok(f),
                    _ => err(pos, "expected ')'"),
                }
            }
            Some(t) => err(pos, format!("unexpected token {t:?}")),
            None => err(pos, "unexpected end of input"),
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            err(self.here(), "trailing input")
        }
    }

    /// Comma-separated formulas, stopping before `|-` or the end.
    fn formula_list(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if matches!(self.peek(), None | Some(Tok::Turnstile)) {
            return Ok(out);
        }
        out.push(self.chain()?);
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.bump();
            out.push(self.chain()?);
        }
        Ok(out)
    }
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.chain()?;
    p.end()?;
    Ok(f)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse_formula(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequentError {
    #[error("a sequent needs at least one formula on some side")]
    BothSidesEmpty,
}

/// An ordered sequent. Both sides are sequences, never multisets: with
/// non-associative connectives the order of the commas carries meaning.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    antecedents: Vec<Formula>,
    succedents: Vec<Formula>,
}

impl Sequent {
    pub fn new(
        antecedents: Vec<Formula>,
        succedents: Vec<Formula>,
    ) -> Result<Sequent, SequentError> {
        if antecedents.is_empty() && succedents.is_empty() {
            return Err(SequentError::BothSidesEmpty);
        }
        Ok(Sequent {
            antecedents,
            succedents,
        })
    }

    /// A right-sided sequent `⊢ Γ`.
    pub fn right(succedents: Vec<Formula>) -> Result<Sequent, SequentError> {
        Sequent::new(Vec::new(), succedents)
    }

    pub fn antecedents(&self) -> &[Formula] {
        &self.antecedents
    }

    pub fn succedents(&self) -> &[Formula] {
        &self.succedents
    }

    pub fn is_right_sided(&self) -> bool {
        self.antecedents.is_empty()
    }

    /// Atoms of both sides.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in self.antecedents.iter().chain(&self.succedents) {
            f.collect_atoms(&mut out);
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.antecedents.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        if self.antecedents.is_empty() {
            write!(f, "|-")?;
        } else {
            write!(f, " |-")?;
        }
        for (k, b) in self.succedents.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, " {b}")?;
        }
        Ok(())
    }
}

/// Parses `F1, F2 |- G1, G2`; either side may be empty, not both.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let antecedents = p.formula_list()?;
    let pos = p.here();
    match p.bump() {
        Some(Tok::Turnstile) => {}
        _ => return err(pos, "expected '|-'"),
    }
    let succedents = p.formula_list()?;
    p.end()?;
    Sequent::new(antecedents, succedents)
        .map_err(|_| ParseError {
            pos: 0,
            msg: "a sequent needs at least one formula on some side".to_string(),
        })
}

impl FromStr for Sequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Sequent, ParseError> {
        parse_sequent(s)
    }
}

/// Left-associated `par` fold of a nonempty sequence; `None` when empty.
pub fn fold_pars(fs: &[Formula]) -> Option<Formula> {
    let mut it = fs.iter().cloned();
    let first = it.next()?;
    Some(it.fold(first, Formula::par))
}

/// Left-associated `tensor` fold of a nonempty sequence; `None` when empty.
pub fn fold_tensors(fs: &[Formula]) -> Option<Formula> {
    let mut it = fs.iter().cloned();
    let first = it.next()?;
    Some(it.fold(first, Formula::tensor))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("atom '{0}' is not bound in the assignment")]
    UnboundAtom(String),
}

/// A map from atom names to facts of one fixed structure.
#[derive(Debug, Clone)]
pub struct Assignment<'q> {
    q: &'q QStructure,
    map: BTreeMap<String, ElemSet>,
}

impl<'q> Assignment<'q> {
    pub fn new(q: &'q QStructure) -> Assignment<'q> {
        Assignment {
            q,
            map: BTreeMap::new(),
        }
    }

    pub fn structure(&self) -> &'q QStructure {
        self.q
    }

    /// Binds an atom to a set, which must be a fact of the structure.
    pub fn bind(&mut self, atom: impl Into<String>, set: ElemSet) -> Result<(), FactError> {
        if !self.q.is_fact_set(set) {
            return Err(FactError::NotClosed);
        }
        self.map.insert(atom.into(), set);
        Ok(())
    }

    /// Binds an atom to a fact of the same structure.
    pub fn bind_fact(&mut self, atom: impl Into<String>, fact: &Fact<'_>) -> Result<(), FactError> {
        if fact.structure() != self.q {
            return Err(FactError::MixedStructures);
        }
        self.map.insert(atom.into(), fact.set());
        Ok(())
    }

    pub fn get(&self, atom: &str) -> Option<ElemSet> {
        self.map.get(atom).copied()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, ElemSet)> {
        self.map.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn eval_set(&self, f: &Formula) -> Result<ElemSet, EvalError> {
        Ok(match f {
            Formula::Atom(a) => self
                .map
                .get(a)
                .copied()
                .ok_or_else(|| EvalError::UnboundAtom(a.clone()))?,
            Formula::One => self.q.one_fact().set(),
            Formula::Top => self.q.carrier(),
            Formula::Neg(g) => self.q.neg_set(self.eval_set(g)?),
            Formula::Tensor(l, r) => self.q.tensor_set(self.eval_set(l)?, self.eval_set(r)?),
            Formula::Par(l, r) => self.q.par_set(self.eval_set(l)?, self.eval_set(r)?),
            Formula::With(l, r) => self.q.with_set(self.eval_set(l)?, self.eval_set(r)?),
            Formula::Plus(l, r) => self.q.plus_set(self.eval_set(l)?, self.eval_set(r)?),
        })
    }

    /// The fact a formula denotes under this assignment.
    pub fn eval(&self, f: &Formula) -> Result<Fact<'q>, EvalError> {
        let set = self.eval_set(f)?;
        Ok(self
            .q
            .fact(set)
            .expect("connectives and fact bindings only produce facts"))
    }
}

/// Validity of a sequent in a structure under an assignment: the
/// left-associated tensor of the antecedents linearly implies the
/// left-associated par of the succedents. An empty antecedent side asks
/// whether the folded succedent is valid outright; an empty succedent side
/// denotes `~1`.
pub fn sequent_valid(asg: &Assignment<'_>, s: &Sequent) -> Result<bool, EvalError> {
    let q = asg.structure();
    let ant = fold_tensors(s.antecedents());
    let suc = fold_pars(s.succedents());
    Ok(match (ant, suc) {
        (Some(a), Some(b)) => {
            let fa = asg.eval(&a)?;
            let fb = asg.eval(&b)?;
            fa.limp(&fb).expect("facts share the structure").is_valid()
        }
        (None, Some(b)) => asg.eval(&b)?.is_valid(),
        (Some(a), None) => {
            let fa = asg.eval(&a)?;
            fa.limp(&q.z_fact())
                .expect("facts share the structure")
                .is_valid()
        }
        (None, None) => unreachable!("sequent sides cannot both be empty"),
    })
}

/// Moves every antecedent across the turnstile: the rightmost antecedent
/// peels off first and lands, negated, in the rightmost succedent
/// position. An empty succedent side starts as `~1`. Negations are pushed
/// to normal form. Validity in every model is preserved; the test suite
/// checks that rather than assuming it.
pub fn right_normalize(s: &Sequent) -> Sequent {
    if s.antecedents().is_empty() {
        return s.clone();
    }
    let mut succedents = s.succedents().to_vec();
    if succedents.is_empty() {
        succedents.push(Formula::neg(Formula::One));
    }
    let mut antecedents = s.antecedents().to_vec();
    while let Some(a) = antecedents.pop() {
        succedents.push(a.nnf_negated());
    }
    Sequent::right(succedents).expect("succedent side is nonempty")
}

/// How a countermodel was produced, sufficient to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// The `structure_index`-th structure of the size-`size` enumeration,
    /// with atom facts chosen by `assignment_index` in odometer order.
    Enumerated {
        size: usize,
        structure_index: u64,
        assignment_index: u64,
    },
    /// Structure regenerated by `random_qstructure` at this size and seed.
    Random { size: usize, structure_seed: u64 },
}

#[derive(Debug, Clone)]
pub struct Countermodel {
    pub structure: QStructure,
    pub assignment: BTreeMap<String, ElemSet>,
    pub provenance: Provenance,
    /// 1-based probe number at which the countermodel appeared.
    pub probe: u64,
}

#[derive(Debug, Clone)]
pub enum FalsifyOutcome {
    Countermodel(Box<Countermodel>),
    /// No countermodel within the budget; says nothing about validity.
    Inconclusive { probes: u64 },
}

#[derive(Debug, Clone)]
pub struct FalsifyConfig {
    pub max_size: usize,
    pub seed: u64,
    pub budget: u64,
}

impl FalsifyConfig {
    pub fn new(max_size: usize, seed: u64, budget: u64) -> FalsifyConfig {
        FalsifyConfig {
            max_size,
            seed,
            budget,
        }
    }
}

fn mix(seed: u64, k: u64) -> u64 {
    // splitmix64 step keyed by the probe counter
    let mut z = seed ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Searches for a model and assignment falsifying the sequent: first every
/// enumerable structure (sizes up to 4) with every fact assignment, then
/// seeded random structures with random assignments, until the probe
/// budget runs out. Each (structure, assignment) validity evaluation is
/// one probe. The first countermodel in this deterministic order wins;
/// an inconclusive outcome is not a validity proof.
pub fn falsify(s: &Sequent, config: &FalsifyConfig) -> FalsifyOutcome {
    let atoms: Vec<String> = s.atoms().into_iter().collect();
    let mut probes = 0u64;

    let enum_cap = config.max_size.min(crate::model::MAX_ENUMERATION_SIZE);
    for size in 1..=enum_cap {
        let mut structure_index = 0u64;
        for q in enumerate_qstructures(size).expect("size is within the enumeration cap") {
            let facts: Vec<ElemSet> = q.all_facts().iter().map(|f| f.set()).collect();
            let combos = (facts.len() as u64).pow(atoms.len() as u32);
            for assignment_index in 0..combos {
                if probes >= config.budget {
                    return FalsifyOutcome::Inconclusive { probes };
                }
                probes += 1;
                let mut asg = Assignment::new(&q);
                let mut digits = assignment_index;
                for atom in &atoms {
                    let idx = (digits % facts.len() as u64) as usize;
                    digits /= facts.len() as u64;
                    asg.bind(atom.clone(), facts[idx])
                        .expect("all_facts yields facts");
                }
                if !sequent_valid(&asg, s).expect("all atoms are bound") {
                    return FalsifyOutcome::Countermodel(Box::new(Countermodel {
                        assignment: asg
                            .bindings()
                            .map(|(k, v)| (k.to_string(), v))
                            .collect(),
                        structure: q,
                        provenance: Provenance::Enumerated {
                            size,
                            structure_index,
                            assignment_index,
                        },
                        probe: probes,
                    }));
                }
            }
            structure_index += 1;
        }
    }

    // random phase, only useful past the enumeration cap
    if config.max_size <= enum_cap {
        return FalsifyOutcome::Inconclusive { probes };
    }
    let sizes: Vec<usize> = (enum_cap + 1..=config.max_size).collect();
    let mut k = 0u64;
    while probes < config.budget {
        let size = sizes[(k % sizes.len() as u64) as usize];
        let structure_seed = mix(config.seed, k);
        let Ok(sampled) = random_qstructure(&RandomModelConfig::new(size), structure_seed) else {
            k += 1;
            continue;
        };
        let q = sampled.structure;
        let facts: Vec<ElemSet> = q.all_facts().iter().map(|f| f.set()).collect();
        let mut rng_state = mix(structure_seed, 0x5eed);
        // a handful of assignments per structure
        for _ in 0..8 {
            if probes >= config.budget {
                return FalsifyOutcome::Inconclusive { probes };
            }
            probes += 1;
            let mut asg = Assignment::new(&q);
            for atom in &atoms {
                rng_state = mix(rng_state, 1);
                let idx = (rng_state % facts.len() as u64) as usize;
                asg.bind(atom.clone(), facts[idx])
                    .expect("all_facts yields facts");
            }
            if !sequent_valid(&asg, s).expect("all atoms are bound") {
                return FalsifyOutcome::Countermodel(Box::new(Countermodel {
                    assignment: asg
                        .bindings()
                        .map(|(k, v)| (k.to_string(), v))
                        .collect(),
                    structure: q,
                    provenance: Provenance::Random {
                        size,
                        structure_seed,
                    },
                    probe: probes,
                }));
            }
        }
        k += 1;
    }
    FalsifyOutcome::Inconclusive { probes }
}
