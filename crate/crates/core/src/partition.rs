//! Coxeter partitions, Lusztig's partitions and Coxeter embeddings.
//!
//! A partition is a surjection from the generators of a source system onto a
//! set of target letters. [`verify_coxeter_partition`] checks block
//! finiteness and the rank-two reducedness conditions and induces the
//! quotient matrix; [`verify_lusztig_partition`] checks commuting blocks and
//! equal Coxeter numbers on every pair of blocks.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::classify;
use crate::coxeter::{alternating_word, CoxeterError, CoxeterMatrix, GenSet, Label, Word};
use crate::system::{CoxeterSystem, Element, WordError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("not surjective: no generator maps to {0:?}")]
    NotSurjective(String),
    #[error("generator {0:?} is not assigned to any block")]
    Unassigned(String),
    #[error("generator {0:?} is assigned to more than one block")]
    AssignedTwice(String),
    #[error("duplicate target letter {0:?}")]
    DuplicateTarget(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("not a Coxeter partition")]
    NotCoxeterPartition,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("edge ({0}, {1}) has label {2}, contraction needs label 3")]
    EdgeLabel(String, String, Label),
    #[error("target size {k} is not in 1..={n}")]
    BadTargetSize { k: usize, n: usize },
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A surjection from the source generators onto named target letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMap {
    source: CoxeterMatrix,
    target_names: Vec<String>,
    assignment: Vec<usize>,
}

impl PartitionMap {
    pub fn new(
        source: CoxeterMatrix,
        target_names: Vec<String>,
        assignment: Vec<usize>,
    ) -> Result<Self, PartitionError> {
        assert_eq!(assignment.len(), source.rank(), "assignment must be total");
        for (i, a) in target_names.iter().enumerate() {
            if target_names[..i].contains(a) {
                return Err(PartitionError::DuplicateTarget(a.clone()));
            }
        }
        for (t, name) in target_names.iter().enumerate() {
            if !assignment.contains(&t) {
                return Err(PartitionError::NotSurjective(name.clone()));
            }
        }
        assert!(assignment.iter().all(|&t| t < target_names.len()));
        Ok(PartitionMap { source, target_names, assignment })
    }

    /// Builds the map from `(target letter, source generators)` blocks.
    pub fn from_blocks(source: CoxeterMatrix, blocks: &[(String, Vec<usize>)]) -> Result<Self, PartitionError> {
        let mut assignment = vec![None; source.rank()];
        for (t, (_, members)) in blocks.iter().enumerate() {
            for &g in members {
                if assignment[g].is_some() {
                    return Err(PartitionError::AssignedTwice(source.name(g).to_string()));
                }
                assignment[g] = Some(t);
            }
        }
        let assignment = assignment
            .into_iter()
            .enumerate()
            .map(|(g, a)| a.ok_or_else(|| PartitionError::Unassigned(source.name(g).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let names = blocks.iter().map(|(n, _)| n.clone()).collect();
        Self::new(source, names, assignment)
    }

    /// Convenience: blocks given by generator names.
    pub fn from_named_blocks(source: CoxeterMatrix, blocks: &[(&str, &[&str])]) -> Result<Self, PartitionError> {
        let resolved = blocks
            .iter()
            .map(|(t, members)| {
                let idx = members
                    .iter()
                    .map(|m| source.index_of(m).ok_or_else(|| PartitionError::UnknownLetter(m.to_string())))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((t.to_string(), idx))
            })
            .collect::<Result<Vec<_>, PartitionError>>()?;
        Self::from_blocks(source, &resolved)
    }

    pub fn source(&self) -> &CoxeterMatrix {
        &self.source
    }

    pub fn target_names(&self) -> &[String] {
        &self.target_names
    }

    pub fn target_count(&self) -> usize {
        self.target_names.len()
    }

    pub fn target_of(&self, g: usize) -> usize {
        self.assignment[g]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn block(&self, t: usize) -> GenSet {
        (0..self.source.rank()).filter(|&g| self.assignment[g] == t).collect()
    }

    pub fn blocks(&self) -> Vec<GenSet> {
        (0..self.target_count()).map(|t| self.block(t)).collect()
    }

    pub fn target_index(&self, name: &str) -> Option<usize> {
        self.target_names.iter().position(|n| n == name)
    }

    pub fn blocks_commute(&self) -> bool {
        self.blocks().into_iter().all(|b| self.source.is_commuting(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub target: String,
    pub members: Vec<String>,
    pub parabolic_type: String,
    pub finite: bool,
    pub longest_word: Option<Vec<String>>,
    pub longest_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateCheck {
    pub m: u64,
    pub alternating_reduced: bool,
    pub is_longest_element: bool,
    pub order_exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairCase {
    /// The union of the two blocks generates a finite parabolic.
    #[serde(rename = "2a")]
    FiniteOrder,
    /// The union is infinite; every alternating word must be reduced.
    #[serde(rename = "2b")]
    InfiniteByPowers,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub s: String,
    pub t: String,
    pub case: PairCase,
    pub parabolic_type: String,
    pub w0_length: Option<u64>,
    pub candidates: Vec<CandidateCheck>,
    pub powers_reduced: Option<bool>,
    pub m: Option<Label>,
    pub ok: bool,
    pub diagnosis: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterReport {
    pub blocks: Vec<BlockReport>,
    pub pairs: Vec<PairReport>,
    pub is_coxeter_partition: bool,
    #[serde(skip)]
    pub longest: Vec<Option<Element>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub members: Vec<String>,
    pub parabolic_type: String,
    pub coxeter_number: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LusztigPairReport {
    pub s: String,
    pub t: String,
    pub components: Vec<ComponentReport>,
    pub all_equal: bool,
    pub m: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LusztigReport {
    pub blocks_commute: bool,
    pub non_commuting: Vec<String>,
    pub pairs: Vec<LusztigPairReport>,
    pub is_lusztig_partition: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    #[serde(rename = "finite order")]
    FiniteOrder,
    #[serde(rename = "inf via 2(b)")]
    InfiniteByPowers,
}

/// The induced system `(W, S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientSystem {
    pub matrix: CoxeterMatrix,
    pub provenance: Vec<(usize, usize, Provenance)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub coxeter: CoxeterReport,
    pub lusztig: LusztigReport,
    pub is_coxeter_partition: bool,
    pub is_lusztig_partition: bool,
    pub quotient_type: Option<String>,
    pub quotient_edges: Option<Vec<(String, String, Label)>>,
    pub diagnoses: Vec<String>,
    /// Lusztig and Coxeter `m_st` agree wherever both are defined.
    pub quotients_consistent: bool,
}

fn names(matrix: &CoxeterMatrix, set: GenSet) -> Vec<String> {
    set.iter().map(|i| matrix.name(i).to_string()).collect()
}

fn word_names(matrix: &CoxeterMatrix, word: &Word) -> Vec<String> {
    word.letters().iter().map(|&i| matrix.name(i).to_string()).collect()
}

/// Candidate `m >= 2` with `ceil(m/2) ls + floor(m/2) lt = l0`.
pub fn length_candidates(ls: u64, lt: u64, l0: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let period = ls + lt;
    if period == 0 {
        return out;
    }
    if l0 % period == 0 && l0 / period >= 1 {
        out.push(2 * (l0 / period));
    }
    if l0 >= ls && (l0 - ls) % period == 0 && (l0 - ls) / period >= 1 {
        out.push(2 * ((l0 - ls) / period) + 1);
    }
    out.sort_unstable();
    out
}

/// Condition (2) for one pair, with the longest elements given by any reduced
/// words. All word computations run inside the parabolic on `union`.
pub fn check_pair(
    system: &CoxeterSystem,
    union: GenSet,
    (s_name, word_s): (&str, &Word),
    (t_name, word_t): (&str, &Word),
) -> PairReport {
    let matrix = system.matrix();
    let mut report = PairReport {
        s: s_name.to_string(),
        t: t_name.to_string(),
        case: PairCase::FiniteOrder,
        parabolic_type: classify::describe(matrix, union),
        w0_length: None,
        candidates: Vec::new(),
        powers_reduced: None,
        m: None,
        ok: false,
        diagnosis: None,
    };
    let parabolic = match system.parabolic(union) {
        Ok(p) => p,
        Err(e) => {
            report.diagnosis = Some(format!("({s_name},{t_name}): undecided: {e}"));
            return report;
        }
    };
    let sub = &parabolic.system;
    let local = |w: &Word| parabolic.restriction.from_parent_word(w).expect("block words lie in the union");
    let (word_s, word_t) = (local(word_s), local(word_t));
    if let Some(l0) = classify::positive_roots(matrix, union) {
        report.w0_length = Some(l0);
        let product = sub.normal_form(&word_s.concat(&word_t));
        for m in length_candidates(word_s.len() as u64, word_t.len() as u64, l0) {
            let alt = alternating_word(&word_s, &word_t, m as usize);
            let alternating_reduced = sub.is_reduced(&alt);
            let is_longest_element = alternating_reduced && sub.right_descents(&alt) == sub.matrix().all();
            let order_exact = sub.order_exactly(&product, m);
            report.candidates.push(CandidateCheck { m, alternating_reduced, is_longest_element, order_exact });
            if alternating_reduced && is_longest_element && order_exact {
                report.m = Some(Label::Finite(m as u32));
                report.ok = true;
                break;
            }
        }
        if !report.ok {
            report.diagnosis = Some(if report.candidates.is_empty() {
                format!(
                    "({s_name},{t_name}): no m with alternating length {} matching l(w0) = {l0}",
                    word_s.len() + word_t.len()
                )
            } else {
                format!("({s_name},{t_name}): no alternating product is a reduced word for w0 of order m")
            });
        }
    } else {
        report.case = PairCase::InfiniteByPowers;
        match sub.all_alternating_reduced(&word_s, &word_t) {
            Ok(all) => {
                report.powers_reduced = Some(all);
                report.ok = all;
                if all {
                    report.m = Some(Label::Infinite);
                } else {
                    report.diagnosis = Some(format!(
                        "({s_name},{t_name}): parabolic is infinite but some alternating word is not reduced"
                    ));
                }
            }
            Err(e) => report.diagnosis = Some(format!("({s_name},{t_name}): undecided: {e}")),
        }
    }
    report
}

pub fn verify_coxeter_partition(system: &CoxeterSystem, pi: &PartitionMap) -> CoxeterReport {
    let matrix = system.matrix();
    let blocks = pi.blocks();
    let mut longest = Vec::new();
    let mut block_reports = Vec::new();
    for (t, &block) in blocks.iter().enumerate() {
        let lng = system.longest_element(block).ok();
        block_reports.push(BlockReport {
            target: pi.target_names[t].clone(),
            members: names(matrix, block),
            parabolic_type: classify::describe(matrix, block),
            finite: lng.is_some(),
            longest_word: lng.as_ref().map(|e| word_names(matrix, e.word())),
            longest_length: lng.as_ref().map(Element::len),
        });
        longest.push(lng);
    }
    let mut pairs = Vec::new();
    if longest.iter().all(Option::is_some) {
        for s in 0..blocks.len() {
            for t in s + 1..blocks.len() {
                let ws = longest[s].as_ref().unwrap().word();
                let wt = longest[t].as_ref().unwrap().word();
                pairs.push(check_pair(
                    system,
                    blocks[s].union(blocks[t]),
                    (&pi.target_names[s], ws),
                    (&pi.target_names[t], wt),
                ));
            }
        }
    }
    let is_coxeter_partition =
        block_reports.iter().all(|b| b.finite) && pairs.iter().all(|p| p.ok);
    CoxeterReport { blocks: block_reports, pairs, is_coxeter_partition, longest }
}

pub fn verify_lusztig_partition(system: &CoxeterSystem, pi: &PartitionMap) -> LusztigReport {
    let matrix = system.matrix();
    let blocks = pi.blocks();
    let mut non_commuting = Vec::new();
    for (t, &block) in blocks.iter().enumerate() {
        let members: Vec<usize> = block.iter().collect();
        'block: for (a, &x) in members.iter().enumerate() {
            for &y in &members[a + 1..] {
                if !matrix.commute(x, y) {
                    let (nx, ny) = (matrix.name(x), matrix.name(y));
                    non_commuting.push(format!(
                        "U({}) = {} and {nx}{ny} ≠ {ny}{nx}",
                        pi.target_names[t],
                        matrix.format_set(block)
                    ));
                    break 'block;
                }
            }
        }
    }
    let mut pairs = Vec::new();
    for s in 0..blocks.len() {
        for t in s + 1..blocks.len() {
            let union = blocks[s].union(blocks[t]);
            let components: Vec<ComponentReport> = classify::classify_subset(matrix, union)
                .into_iter()
                .map(|(c, cls)| ComponentReport {
                    members: names(matrix, c),
                    parabolic_type: classify::describe(matrix, c),
                    coxeter_number: cls.coxeter_number(),
                })
                .collect();
            let first = components[0].coxeter_number;
            let all_equal = components.iter().all(|c| c.coxeter_number == first);
            pairs.push(LusztigPairReport {
                s: pi.target_names[s].clone(),
                t: pi.target_names[t].clone(),
                components,
                all_equal,
                m: all_equal.then_some(first),
            });
        }
    }
    let blocks_commute = non_commuting.is_empty();
    let is_lusztig_partition = blocks_commute && pairs.iter().all(|p| p.all_equal);
    LusztigReport { blocks_commute, non_commuting, pairs, is_lusztig_partition }
}

/// The quotient matrix from pairwise `m_st` values, in pair order `(0,1), (0,2), ...`.
fn quotient_from_pairs(pi: &PartitionMap, ms: &[Label]) -> Result<CoxeterMatrix, PartitionError> {
    let k = pi.target_count();
    let mut edges = Vec::new();
    let mut idx = 0;
    for s in 0..k {
        for t in s + 1..k {
            edges.push((s, t, ms[idx]));
            idx += 1;
        }
    }
    Ok(CoxeterMatrix::from_edges(pi.target_names(), &edges)?)
}

pub fn induced_quotient(pi: &PartitionMap, report: &CoxeterReport) -> Result<QuotientSystem, PartitionError> {
    if !report.is_coxeter_partition {
        return Err(PartitionError::NotCoxeterPartition);
    }
    let ms: Vec<Label> = report.pairs.iter().map(|p| p.m.unwrap()).collect();
    let matrix = quotient_from_pairs(pi, &ms)?;
    let mut provenance = Vec::new();
    let mut idx = 0;
    for s in 0..pi.target_count() {
        for t in s + 1..pi.target_count() {
            let kind = match report.pairs[idx].case {
                PairCase::FiniteOrder => Provenance::FiniteOrder,
                PairCase::InfiniteByPowers => Provenance::InfiniteByPowers,
            };
            provenance.push((s, t, kind));
            idx += 1;
        }
    }
    Ok(QuotientSystem { matrix, provenance })
}

/// The quotient suggested by the Lusztig `m_st` values, when all pairs have a common value.
pub fn lusztig_quotient(pi: &PartitionMap, report: &LusztigReport) -> Option<CoxeterMatrix> {
    let ms: Option<Vec<Label>> = report.pairs.iter().map(|p| p.m).collect();
    quotient_from_pairs(pi, &ms?).ok()
}

pub fn edge_list(matrix: &CoxeterMatrix) -> Vec<(String, String, Label)> {
    let n = matrix.rank();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if matrix.get(i, j) != Label::Finite(2) {
                out.push((matrix.name(i).to_string(), matrix.name(j).to_string(), matrix.get(i, j)));
            }
        }
    }
    out
}

/// Runs both verifiers.
pub fn verify(system: &CoxeterSystem, pi: &PartitionMap) -> VerificationReport {
    let coxeter = verify_coxeter_partition(system, pi);
    let lusztig = verify_lusztig_partition(system, pi);
    let quotient = induced_quotient(pi, &coxeter).ok();
    let mut diagnoses: Vec<String> = Vec::new();
    for b in &coxeter.blocks {
        if !b.finite {
            diagnoses.push(format!("U({}) generates an infinite parabolic ({})", b.target, b.parabolic_type));
        }
    }
    diagnoses.extend(coxeter.pairs.iter().filter_map(|p| p.diagnosis.clone()));
    diagnoses.extend(lusztig.non_commuting.iter().cloned());
    for p in &lusztig.pairs {
        if !p.all_equal {
            let hs: Vec<String> = p.components.iter().map(|c| c.coxeter_number.to_string()).collect();
            diagnoses.push(format!("({},{}): component Coxeter numbers differ: {}", p.s, p.t, hs.join(", ")));
        }
    }
    let quotients_consistent = coxeter
        .pairs
        .iter()
        .zip(&lusztig.pairs)
        .all(|(c, l)| match (c.m, l.m) {
            (Some(a), Some(b)) if coxeter.is_coxeter_partition && lusztig.is_lusztig_partition => a == b,
            _ => true,
        });
    VerificationReport {
        is_coxeter_partition: coxeter.is_coxeter_partition,
        is_lusztig_partition: lusztig.is_lusztig_partition,
        quotient_type: quotient.as_ref().map(|q| classify::describe(&q.matrix, q.matrix.all())),
        quotient_edges: quotient.as_ref().map(|q| edge_list(&q.matrix)),
        coxeter,
        lusztig,
        diagnoses,
        quotients_consistent,
    }
}

/// Generator images of a Coxeter embedding: `s` goes to the longest element of `U(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingMap {
    pub images: Vec<Word>,
}

impl EmbeddingMap {
    pub fn from_report(report: &CoxeterReport) -> Result<Self, PartitionError> {
        if !report.is_coxeter_partition {
            return Err(PartitionError::NotCoxeterPartition);
        }
        Ok(EmbeddingMap {
            images: report.longest.iter().map(|e| e.as_ref().unwrap().word().clone()).collect(),
        })
    }

    pub fn embed(&self, word: &Word) -> Word {
        Word(word.letters().iter().flat_map(|&s| self.images[s].letters().iter().copied()).collect())
    }
}

/// Letter-by-letter substitution of target names by the block longest words.
pub fn embed(pi: &PartitionMap, embedding: &EmbeddingMap, letters: &[&str]) -> Result<Word, PartitionError> {
    let word = letters
        .iter()
        .map(|l| pi.target_index(l).ok_or_else(|| PartitionError::UnknownLetter(l.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(embedding.embed(&Word(word)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub radius: usize,
    pub elements: usize,
    pub complete: bool,
    pub reduced_violations: usize,
    pub injectivity_violations: usize,
    pub descent_violations: usize,
    pub length_violations: usize,
    pub first_violation: Option<String>,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.reduced_violations == 0
            && self.injectivity_violations == 0
            && self.descent_violations == 0
            && self.length_violations == 0
    }
}

/// Checks reduced-word preservation, injectivity, descent correspondence and
/// length additivity of the embedding on the ball of the given radius in the quotient.
pub fn check_embedding_properties(
    source: &CoxeterSystem,
    pi: &PartitionMap,
    report: &CoxeterReport,
    radius: usize,
) -> Result<PropertyReport, PartitionError> {
    let quotient = induced_quotient(pi, report)?;
    let embedding = EmbeddingMap::from_report(report)?;
    let target = CoxeterSystem::with_caps(quotient.matrix.clone(), *source.caps())?;
    let (ball, complete) = target.ball(radius, source.caps().ball);
    let blocks = pi.blocks();
    let lengths: Vec<usize> = embedding.images.iter().map(Word::len).collect();
    let mut out = PropertyReport {
        radius,
        elements: ball.len(),
        complete,
        reduced_violations: 0,
        injectivity_violations: 0,
        descent_violations: 0,
        length_violations: 0,
        first_violation: None,
    };
    let mut images: HashMap<Element, Element> = HashMap::new();
    let src = source.matrix();
    let note = |out: &mut PropertyReport, msg: String| {
        if out.first_violation.is_none() {
            out.first_violation = Some(msg);
        }
    };
    for w in &ball {
        let image = embedding.embed(w.word());
        let wname = quotient.matrix.format_word(w.word());
        if !source.is_reduced(&image) {
            out.reduced_violations += 1;
            note(&mut out, format!("image of [{wname}] is not reduced"));
        }
        let nf = source.normal_form(&image);
        let expected_len: usize = w.word().letters().iter().map(|&s| lengths[s]).sum();
        if nf.len() != expected_len {
            out.length_violations += 1;
            note(&mut out, format!("image of [{wname}] has length {} instead of {expected_len}", nf.len()));
        }
        if let Some(prev) = images.insert(nf, w.clone()) {
            out.injectivity_violations += 1;
            note(
                &mut out,
                format!("[{wname}] and [{}] have the same image", quotient.matrix.format_word(prev.word())),
            );
        }
        let rd_w = target.right_descents(w.word());
        let rd_img = source.right_descents(&image);
        for (s, &block) in blocks.iter().enumerate() {
            let expected = if rd_w.contains(s) { block } else { GenSet::EMPTY };
            let got = rd_img.intersection(block);
            if got != expected {
                out.descent_violations += block.iter().filter(|&g| got.contains(g) != expected.contains(g)).count();
                note(
                    &mut out,
                    format!(
                        "descents of the image of [{wname}] meet U({}) in {}",
                        pi.target_names[s],
                        src.format_set(got)
                    ),
                );
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutingVerdict {
    pub coxeter: bool,
    pub lusztig: bool,
    pub agree: bool,
    pub counterexample: Option<String>,
}

/// For commuting blocks the two notions coincide; runs both verifiers and compares.
pub fn classify_commuting_partition(
    system: &CoxeterSystem,
    pi: &PartitionMap,
) -> Result<CommutingVerdict, PartitionError> {
    if !pi.blocks_commute() {
        return Err(PartitionError::NotApplicable("blocks do not commute".into()));
    }
    let coxeter = verify_coxeter_partition(system, pi);
    let lusztig = verify_lusztig_partition(system, pi);
    let agree = coxeter.is_coxeter_partition == lusztig.is_lusztig_partition;
    let counterexample = (!agree).then(|| {
        let blocks: Vec<String> = pi
            .blocks()
            .iter()
            .zip(pi.target_names())
            .map(|(b, t)| format!("{t} <- {}", pi.source().format_set(*b)))
            .collect();
        format!(
            "coxeter={} lusztig={} for blocks [{}]; coxeter pairs {:?}; lusztig pairs {:?}",
            coxeter.is_coxeter_partition,
            lusztig.is_lusztig_partition,
            blocks.join("; "),
            coxeter.pairs.iter().map(|p| (p.s.clone(), p.t.clone(), p.m)).collect::<Vec<_>>(),
            lusztig.pairs.iter().map(|p| (p.s.clone(), p.t.clone(), p.m)).collect::<Vec<_>>(),
        )
    });
    Ok(CommutingVerdict {
        coxeter: coxeter.is_coxeter_partition,
        lusztig: lusztig.is_lusztig_partition,
        agree,
        counterexample,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterNumberVerdict {
    pub quotient_h: Label,
    pub component_h: Vec<(Vec<String>, Label)>,
    pub holds: bool,
}

/// Every source component of a Lusztig's partition with irreducible quotient
/// has the quotient's Coxeter number.
pub fn check_coxeter_number_preservation(
    system: &CoxeterSystem,
    pi: &PartitionMap,
) -> Result<CoxeterNumberVerdict, PartitionError> {
    let report = verify_lusztig_partition(system, pi);
    if !report.is_lusztig_partition {
        return Err(PartitionError::NotApplicable("not a Lusztig's partition".into()));
    }
    let quotient = lusztig_quotient(pi, &report)
        .ok_or_else(|| PartitionError::NotApplicable("no common m_st".into()))?;
    let comps = quotient.components();
    if comps.len() != 1 {
        return Err(PartitionError::NotApplicable("quotient is reducible".into()));
    }
    let quotient_h = classify::coxeter_number(&quotient, comps[0]);
    let src = system.matrix();
    let component_h: Vec<(Vec<String>, Label)> = src
        .components()
        .into_iter()
        .map(|c| (names(src, c), classify::coxeter_number(src, c)))
        .collect();
    let holds = component_h.iter().all(|(_, h)| *h == quotient_h);
    Ok(CoxeterNumberVerdict { quotient_h, component_h, holds })
}

/// Restricted growth strings with exactly `k` blocks, pruned by a
/// subset-closed block predicate. Blocks are numbered by least member.
pub struct PartitionSearch<'a> {
    n: usize,
    k: usize,
    accept_block: &'a mut dyn FnMut(GenSet) -> bool,
    cap: u64,
    pub examined: u64,
    pub truncated: bool,
}

impl<'a> PartitionSearch<'a> {
    pub fn new(n: usize, k: usize, cap: u64, accept_block: &'a mut dyn FnMut(GenSet) -> bool) -> Self {
        PartitionSearch { n, k, accept_block, cap, examined: 0, truncated: false }
    }

    /// Calls `visit` with each complete assignment.
    pub fn run(&mut self, visit: &mut dyn FnMut(&[usize])) {
        let mut assignment = Vec::with_capacity(self.n);
        let mut blocks = Vec::with_capacity(self.k);
        self.descend(&mut assignment, &mut blocks, visit);
    }

    fn descend(&mut self, assignment: &mut Vec<usize>, blocks: &mut Vec<GenSet>, visit: &mut dyn FnMut(&[usize])) {
        if self.truncated {
            return;
        }
        self.examined += 1;
        if self.examined > self.cap {
            self.truncated = true;
            return;
        }
        let i = assignment.len();
        if i == self.n {
            if blocks.len() == self.k {
                visit(assignment);
            }
            return;
        }
        // not enough elements left to open the remaining blocks
        if self.k - blocks.len() > self.n - i {
            return;
        }
        for b in 0..blocks.len() {
            let grown = blocks[b].union(GenSet::singleton(i));
            if (self.accept_block)(grown) {
                let old = std::mem::replace(&mut blocks[b], grown);
                assignment.push(b);
                self.descend(assignment, blocks, visit);
                assignment.pop();
                blocks[b] = old;
            }
        }
        if blocks.len() < self.k && (self.accept_block)(GenSet::singleton(i)) {
            blocks.push(GenSet::singleton(i));
            assignment.push(blocks.len() - 1);
            self.descend(assignment, blocks, visit);
            assignment.pop();
            blocks.pop();
        }
    }
}

/// Default names for anonymous target letters.
pub fn target_letter(i: usize) -> String {
    const LETTERS: [&str; 8] = ["s", "t", "u", "v", "w", "x", "y", "z"];
    LETTERS.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("r{i}"))
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub partitions: Vec<(PartitionMap, VerificationReport)>,
    pub examined: u64,
    pub truncated: bool,
}

/// All surjections onto `k` anonymous letters that are Coxeter partitions.
pub fn enumerate_partitions(system: &CoxeterSystem, k: usize) -> Result<Enumeration, PartitionError> {
    let matrix = system.matrix().clone();
    let n = matrix.rank();
    if k == 0 || k > n {
        return Err(PartitionError::BadTargetSize { k, n });
    }
    let mut finite_cache: HashMap<GenSet, bool> = HashMap::new();
    let mut accept = |b: GenSet| *finite_cache.entry(b).or_insert_with(|| classify::is_finite(&matrix, b));
    let mut search = PartitionSearch::new(n, k, system.caps().candidates, &mut accept);
    let mut found = Vec::new();
    let targets: Vec<String> = (0..k).map(target_letter).collect();
    search.run(&mut |assignment| {
        let pi = PartitionMap::new(matrix.clone(), targets.clone(), assignment.to_vec())
            .expect("search produces surjections");
        let report = verify(system, &pi);
        if report.is_coxeter_partition {
            found.push((pi, report));
        }
    });
    Ok(Enumeration { partitions: found, examined: search.examined, truncated: search.truncated })
}

/// All surjections onto `k` anonymous letters whose blocks are pairwise commuting.
pub fn commuting_surjections(matrix: &CoxeterMatrix, k: usize, cap: u64) -> (Vec<PartitionMap>, bool) {
    let mut accept = |b: GenSet| matrix.is_commuting(b);
    let mut search = PartitionSearch::new(matrix.rank(), k, cap, &mut accept);
    let targets: Vec<String> = (0..k).map(target_letter).collect();
    let mut out = Vec::new();
    search.run(&mut |assignment| {
        out.push(PartitionMap::new(matrix.clone(), targets.clone(), assignment.to_vec()).unwrap());
    });
    (out, search.truncated)
}

/// An edge contraction `(s+, s-) -> s0` with its word map `s0 -> s+ s- s+`.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub matrix: CoxeterMatrix,
    pub contracted: usize,
    pub word_map: Vec<Word>,
    pub surjection: PartitionMap,
}

impl Contraction {
    pub fn map_word(&self, word: &Word) -> Word {
        Word(word.letters().iter().flat_map(|&g| self.word_map[g].letters().iter().copied()).collect())
    }
}

pub fn edge_contract(source: &CoxeterMatrix, plus: usize, minus: usize) -> Result<Contraction, PartitionError> {
    let label = source.get(plus, minus);
    if plus == minus || label != Label::Finite(3) {
        return Err(PartitionError::EdgeLabel(
            source.name(plus).to_string(),
            source.name(minus).to_string(),
            label,
        ));
    }
    let mut new_name = "s0".to_string();
    while source.index_of(&new_name).is_some() {
        new_name.push('\'');
    }
    // new generators: declaration order with the contracted pair replaced at its first position
    let first = plus.min(minus);
    let mut old_of_new: Vec<Option<usize>> = Vec::new();
    let mut new_of_old = vec![0; source.rank()];
    for g in 0..source.rank() {
        if g == first {
            new_of_old[g] = old_of_new.len();
            old_of_new.push(None);
        } else if g == plus || g == minus {
            new_of_old[g] = new_of_old[first];
        } else {
            new_of_old[g] = old_of_new.len();
            old_of_new.push(Some(g));
        }
    }
    let contracted = new_of_old[first];
    let names: Vec<String> = old_of_new
        .iter()
        .map(|o| o.map(|g| source.name(g).to_string()).unwrap_or_else(|| new_name.clone()))
        .collect();
    let joined = |s: usize| -> Label {
        let (a, b) = (source.get(s, plus), source.get(s, minus));
        match (a, b) {
            // m(s,s+) + m(s,s-) - 2 when one of them is 2
            (Label::Finite(2), m) | (m, Label::Finite(2)) => m,
            _ => Label::Infinite,
        }
    };
    let mut edges = Vec::new();
    for (i, oi) in old_of_new.iter().enumerate() {
        for (j, oj) in old_of_new.iter().enumerate().skip(i + 1) {
            let m = match (oi, oj) {
                (Some(a), Some(b)) => source.get(*a, *b),
                (None, Some(s)) | (Some(s), None) => joined(*s),
                (None, None) => unreachable!(),
            };
            edges.push((i, j, m));
        }
    }
    let matrix = CoxeterMatrix::from_edges(&names, &edges)?;
    let word_map = old_of_new
        .iter()
        .map(|o| match o {
            Some(g) => Word(vec![*g]),
            None => Word(vec![plus, minus, plus]),
        })
        .collect();
    let surjection = PartitionMap::new(source.clone(), names.clone(), new_of_old)?;
    Ok(Contraction { matrix, contracted, word_map, surjection })
}

/// Scans reduced words of the contracted system in ShortLex order up to
/// `max_len` for one whose image is not reduced in the source.
pub fn find_non_reduced_image(
    contraction: &Contraction,
    source: &CoxeterSystem,
    contracted: &CoxeterSystem,
    max_len: usize,
) -> Option<Word> {
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..contracted.rank() {
                let cand = w.concat(&Word(vec![s]));
                if !contracted.is_reduced(&cand) {
                    continue;
                }
                if !source.is_reduced(&contraction.map_word(&cand)) {
                    return Some(cand);
                }
                next.push(cand);
            }
        }
        frontier = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Label::{Finite as F, Infinite as Inf};

    #[test]
    fn candidates_from_lengths() {
        // A4 -> B2: l(s) = 2, l(t) = 3, l(w0) = 10
        assert_eq!(length_candidates(2, 3, 10), vec![4]);
        // D4 -> G2: 3 and 1, l(w0) = 12
        assert_eq!(length_candidates(3, 1, 12), vec![6]);
        assert_eq!(length_candidates(1, 1, 3), vec![3]);
        // A3 with blocks {a,b}, {c}: 3 and 1, l(w0) = 6
        assert_eq!(length_candidates(3, 1, 6), Vec::<u64>::new());
        assert_eq!(length_candidates(2, 2, 4), vec![2]);
    }

    #[test]
    fn surjectivity_is_checked() {
        let m = CoxeterMatrix::from_named_edges(&["a", "b"], &[("a", "b", F(3))]).unwrap();
        let err = PartitionMap::from_named_blocks(m.clone(), &[("s", &["a", "b"]), ("t", &[])]);
        assert_eq!(err, Err(PartitionError::NotSurjective("t".into())));
        let err = PartitionMap::from_named_blocks(m.clone(), &[("s", &["a"])]);
        assert_eq!(err, Err(PartitionError::Unassigned("b".into())));
        let err = PartitionMap::from_named_blocks(m, &[("s", &["a", "b"]), ("t", &["b"])]);
        assert_eq!(err, Err(PartitionError::AssignedTwice("b".into())));
    }

    #[test]
    fn partition_search_counts() {
        // Stirling numbers S(5, 2) = 15, S(5, 3) = 25
        for (k, expected) in [(1, 1), (2, 15), (3, 25), (5, 1)] {
            let mut accept = |_: GenSet| true;
            let mut search = PartitionSearch::new(5, k, 1_000_000, &mut accept);
            let mut count = 0;
            search.run(&mut |a| {
                assert_eq!(a[0], 0);
                count += 1;
            });
            assert_eq!(count, expected, "k = {k}");
        }
    }

    #[test]
    fn contraction_formula() {
        let a3 = CoxeterMatrix::from_named_edges(&["a", "b", "c"], &[("a", "b", F(3)), ("b", "c", F(3))]).unwrap();
        let c = edge_contract(&a3, 0, 1).unwrap();
        assert_eq!(c.matrix.names(), &["s0".to_string(), "c".to_string()]);
        assert_eq!(c.matrix.get(0, 1), F(3));
        assert_eq!(c.map_word(&Word(vec![0, 1])), Word(vec![0, 1, 0, 2]));
        let tri = CoxeterMatrix::from_named_edges(
            &["a", "b", "c"],
            &[("a", "b", F(3)), ("b", "c", F(3)), ("a", "c", F(3))],
        )
        .unwrap();
        assert_eq!(edge_contract(&tri, 0, 1).unwrap().matrix.get(0, 1), Inf);
        let b2 = CoxeterMatrix::from_named_edges(&["a", "b"], &[("a", "b", F(4))]).unwrap();
        assert!(matches!(edge_contract(&b2, 0, 1), Err(PartitionError::EdgeLabel(..))));
    }
}
