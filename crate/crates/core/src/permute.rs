//! Candidate discovery by sorting clause permutations.
//!
//! Every clause is expanded into all orderings of its literals. Each ordering
//! becomes a fixed-length key padded with a sentinel that sorts after every real
//! literal. After sorting, clauses that interact share a key prefix, so each
//! reduction pattern is found by looking inside one prefix range (or, for unit
//! resolution, in the neighbouring range of the complementary literal).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::cnf::{Clause, ClauseId, Lit, Lits};

/// Key slot filler for clauses narrower than three.
pub const SENTINEL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermRecord {
    pub key: [u32; 3],
    pub source: ClauseId,
    pub width: u8,
}

impl PermRecord {
    fn prefix(&self, len: usize) -> &[u32] {
        &self.key[..len]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CandidateKind {
    /// A clause whose literals are a subset of another's.
    Subsume,
    /// A unit clause against a clause holding its complement.
    UnitResolve,
    /// Self-subsuming resolution: a 2-clause `(x+R)` against a 3-clause
    /// containing `!x` and all of `R`. Only reported when enabled.
    SelfSubsume,
    /// Two equal-width clauses identical except for one complementary pair.
    Merge,
}

impl CandidateKind {
    pub fn name(self) -> &'static str {
        match self {
            CandidateKind::Subsume => "subsume",
            CandidateKind::UnitResolve => "unit-resolve",
            CandidateKind::SelfSubsume => "self-subsume",
            CandidateKind::Merge => "r1-merge",
        }
    }
}

/// A detected rewrite opportunity.
///
/// `sources` are in role order: (short, long) for subsumption and
/// self-subsumption, (unit, target) for unit resolution, and (lower id, higher
/// id) for merges. `pivot` is the literal of `sources[0]` the rule acts on; for
/// subsumption it is the short clause's first literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReductionCandidate {
    pub kind: CandidateKind,
    pub sources: [ClauseId; 2],
    pub pivot: Lit,
}

impl ReductionCandidate {
    /// Sources in ascending id order.
    pub fn source_set(&self) -> [ClauseId; 2] {
        let [a, b] = self.sources;
        if a <= b {
            [a, b]
        } else {
            [b, a]
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SortStats {
    pub record_count: usize,
    pub comparisons: u64,
}

impl SortStats {
    /// `2R log2 R + R`, the comparison ceiling for a merge sort of `R` records.
    pub fn comparison_bound(&self) -> f64 {
        let r = self.record_count as f64;
        if r <= 1.0 {
            r
        } else {
            2.0 * r * r.log2() + r
        }
    }
}

fn permutations(lits: &Lits) -> Vec<[u32; 3]> {
    let l: Vec<u32> = lits.iter().map(|l| l.index()).collect();
    match l.len() {
        1 => vec![[l[0], SENTINEL, SENTINEL]],
        2 => vec![[l[0], l[1], SENTINEL], [l[1], l[0], SENTINEL]],
        3 => vec![
            [l[0], l[1], l[2]],
            [l[0], l[2], l[1]],
            [l[1], l[0], l[2]],
            [l[1], l[2], l[0]],
            [l[2], l[0], l[1]],
            [l[2], l[1], l[0]],
        ],
        _ => unreachable!("clause width is 1..=3"),
    }
}

/// One record per literal ordering of every clause.
pub fn expand_permutations(clauses: &[Clause]) -> Vec<PermRecord> {
    clauses
        .iter()
        .flat_map(|c| {
            permutations(&c.lits)
                .into_iter()
                .map(move |key| PermRecord {
                    key,
                    source: c.id,
                    width: c.width() as u8,
                })
        })
        .collect()
}

fn record_order(a: &PermRecord, b: &PermRecord) -> Ordering {
    a.key.cmp(&b.key).then(a.source.cmp(&b.source))
}

/// Top-down merge sort by (key, source), counting comparisons exactly.
pub fn sort_records(mut records: Vec<PermRecord>) -> (Vec<PermRecord>, SortStats) {
    let mut comparisons = 0u64;
    let mut scratch = records.clone();
    merge_sort(&mut records, &mut scratch, &mut comparisons);
    let stats = SortStats {
        record_count: records.len(),
        comparisons,
    };
    (records, stats)
}

fn merge_sort(data: &mut [PermRecord], scratch: &mut [PermRecord], count: &mut u64) {
    let n = data.len();
    if n <= 1 {
        return;
    }
    let mid = n / 2;
    {
        let (lo, hi) = data.split_at_mut(mid);
        let (slo, shi) = scratch.split_at_mut(mid);
        merge_sort(lo, slo, count);
        merge_sort(hi, shi, count);
    }
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        *count += 1;
        if record_order(&data[j], &data[i]) == Ordering::Less {
            scratch[k] = data[j];
            j += 1;
        } else {
            scratch[k] = data[i];
            i += 1;
        }
        k += 1;
    }
    scratch[k..k + (mid - i)].copy_from_slice(&data[i..mid]);
    k += mid - i;
    scratch[k..k + (n - j)].copy_from_slice(&data[j..n]);
    data.copy_from_slice(&scratch[..n]);
}

/// Range of records whose key starts with `prefix`.
fn prefix_range(sorted: &[PermRecord], prefix: &[u32]) -> std::ops::Range<usize> {
    let len = prefix.len();
    let lo = sorted.partition_point(|r| r.prefix(len) < prefix);
    let hi = sorted.partition_point(|r| r.prefix(len) <= prefix);
    lo..hi
}

fn lit(index: u32) -> Lit {
    Lit::from_index(index).expect("record keys hold valid literals")
}

/// Scans sorted records for reduction candidates.
///
/// With `self_subsumption` off, only the three base patterns are reported.
/// The result is deduplicated by (kind, source set) and ordered by kind
/// priority, then by source set.
pub fn scan_adjacent(sorted: &[PermRecord], self_subsumption: bool) -> Vec<ReductionCandidate> {
    let mut found: BTreeMap<(CandidateKind, [ClauseId; 2]), ReductionCandidate> = BTreeMap::new();
    let mut emit = |c: ReductionCandidate| {
        found.entry((c.kind, c.source_set())).or_insert(c);
    };

    for (idx, r) in sorted.iter().enumerate() {
        let w = usize::from(r.width);
        let last = r.key[w - 1];

        // merge: same prefix, complementary final literal, same width
        if last % 2 == 1 {
            let mut target = r.key;
            target[w - 1] = last + 1;
            if let Ok(j) = sorted.binary_search_by(|p| p.key.cmp(&target)) {
                let other = sorted[j].source;
                let (a, b) = if r.source < other {
                    (r.source, other)
                } else {
                    (other, r.source)
                };
                let pivot = if a == r.source {
                    lit(last)
                } else {
                    lit(last + 1)
                };
                emit(ReductionCandidate {
                    kind: CandidateKind::Merge,
                    sources: [a, b],
                    pivot,
                });
            }
        }

        if w < 3 {
            // subsumption: every longer record sharing this full key as prefix;
            // the sentinel puts `r` last in its own prefix range
            let range = prefix_range(sorted, r.prefix(w));
            for other in &sorted[range.start..idx] {
                emit(ReductionCandidate {
                    kind: CandidateKind::Subsume,
                    sources: [r.source, other.source],
                    pivot: lit(r.key[0]),
                });
            }
        }

        if w == 1 {
            // unit resolution: the complement's range is the neighbouring one
            let u = lit(r.key[0]);
            let range = prefix_range(sorted, &[u.complement().index()]);
            for other in &sorted[range] {
                let mut sources = [r.source, other.source];
                let mut pivot = u;
                if other.width == 1 && other.source < r.source {
                    sources = [other.source, r.source];
                    pivot = u.complement();
                }
                emit(ReductionCandidate {
                    kind: CandidateKind::UnitResolve,
                    sources,
                    pivot,
                });
            }
        }

        if self_subsumption && w == 2 {
            // (rest + x) against 3-clauses starting with (rest, !x)
            let x = lit(last);
            let prefix = [r.key[0], x.complement().index()];
            for other in &sorted[prefix_range(sorted, &prefix)] {
                if other.width == 3 {
                    emit(ReductionCandidate {
                        kind: CandidateKind::SelfSubsume,
                        sources: [r.source, other.source],
                        pivot: x,
                    });
                }
            }
        }
    }
    found.into_values().collect()
}

/// Expand, sort and scan in one call.
pub fn discover(
    clauses: &[Clause],
    self_subsumption: bool,
) -> (Vec<ReductionCandidate>, SortStats) {
    let (sorted, stats) = sort_records(expand_permutations(clauses));
    (scan_adjacent(&sorted, self_subsumption), stats)
}

/// Tests one clause pair for every pattern, in both orientations.
pub(crate) fn pair_candidates(
    c1: &Clause,
    c2: &Clause,
    self_subsumption: bool,
    out: &mut Vec<ReductionCandidate>,
) {
    let (a, b) = if c1.id < c2.id { (c1, c2) } else { (c2, c1) };
    let (wa, wb) = (a.width(), b.width());

    if wa != wb {
        let (short, long) = if wa < wb { (a, b) } else { (b, a) };
        if short.lits.is_subset_of(&long.lits) {
            out.push(ReductionCandidate {
                kind: CandidateKind::Subsume,
                sources: [short.id, long.id],
                pivot: short.lits[0],
            });
        }
    }

    for (unit, other) in [(a, b), (b, a)] {
        if unit.width() == 1 && other.lits.contains(unit.lits[0].complement()) {
            out.push(ReductionCandidate {
                kind: CandidateKind::UnitResolve,
                sources: [unit.id, other.id],
                pivot: unit.lits[0],
            });
            break;
        }
    }

    if self_subsumption {
        let (short, long) = if wa < wb { (a, b) } else { (b, a) };
        if short.width() == 2 && long.width() == 3 {
            for &x in short.lits.iter() {
                let rest_in_long = short
                    .lits
                    .iter()
                    .filter(|&&l| l != x)
                    .all(|&l| long.lits.contains(l));
                if rest_in_long && long.lits.contains(x.complement()) {
                    out.push(ReductionCandidate {
                        kind: CandidateKind::SelfSubsume,
                        sources: [short.id, long.id],
                        pivot: x,
                    });
                }
            }
        }
    }

    if wa == wb {
        let diff_a: Vec<Lit> = a
            .lits
            .iter()
            .copied()
            .filter(|&l| !b.lits.contains(l))
            .collect();
        if diff_a.len() == 1 && b.lits.contains(diff_a[0].complement()) {
            out.push(ReductionCandidate {
                kind: CandidateKind::Merge,
                sources: [a.id, b.id],
                pivot: diff_a[0],
            });
        }
    }
}

/// All `m(m-1)/2` clause pairs tested directly. Returns candidates in the
/// same order as [`scan_adjacent`] plus the number of pairs examined.
pub fn discover_pairwise(
    clauses: &[Clause],
    self_subsumption: bool,
) -> (Vec<ReductionCandidate>, u64) {
    let mut out = Vec::new();
    let mut pairs = 0u64;
    for (i, c1) in clauses.iter().enumerate() {
        for c2 in &clauses[i + 1..] {
            pairs += 1;
            pair_candidates(c1, c2, self_subsumption, &mut out);
        }
    }
    out.sort_by_key(|c| (c.kind, c.source_set()));
    (out, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Formula;

    fn f(n: u32, raw: &[&[i64]]) -> Formula {
        Formula::from_signed(n, raw).unwrap()
    }

    #[test]
    fn record_counts_per_width() {
        assert_eq!(expand_permutations(f(3, &[&[1, 2, 3]]).clauses()).len(), 6);
        assert_eq!(expand_permutations(f(3, &[&[1, 2]]).clauses()).len(), 2);
        assert_eq!(expand_permutations(f(3, &[&[1]]).clauses()).len(), 1);
        let m5 = f(
            6,
            &[
                &[1, 2, 3],
                &[4, 5, 6],
                &[-1, 2, 3],
                &[1, -5, 6],
                &[-2, -4, 6],
            ],
        );
        assert_eq!(expand_permutations(m5.clauses()).len(), 30);
    }

    #[test]
    fn clashing_clauses_sort_adjacent() {
        let (sorted, _) = sort_records(expand_permutations(
            f(3, &[&[1, 2, 3], &[1, 2, -3]]).clauses(),
        ));
        let pos_a = sorted.iter().position(|r| r.key == [1, 3, 5]).unwrap();
        let pos_b = sorted.iter().position(|r| r.key == [1, 3, 6]).unwrap();
        assert_eq!(pos_a + 1, pos_b);
    }

    #[test]
    fn sorting_sorted_input_is_identity() {
        let (sorted, _) =
            sort_records(expand_permutations(f(4, &[&[1, 2, 3], &[-1, 4]]).clauses()));
        let (again, _) = sort_records(sorted.clone());
        assert_eq!(sorted, again);
    }

    #[test]
    fn six_record_comparison_bound() {
        let (_, stats) = sort_records(expand_permutations(f(3, &[&[1, 2, 3]]).clauses()));
        assert_eq!(stats.record_count, 6);
        assert!((stats.comparisons as f64) <= stats.comparison_bound());
        assert!(stats.comparison_bound() < 37.1);
    }

    #[test]
    fn merge_candidate() {
        let (c, _) = discover(f(3, &[&[1, 2, 3], &[1, 2, -3]]).clauses(), false);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind, CandidateKind::Merge);
        assert_eq!(c[0].sources, [ClauseId(1), ClauseId(2)]);
        assert_eq!(c[0].pivot.index(), 5);
    }

    #[test]
    fn disjoint_clauses_give_nothing() {
        let (c, _) = discover(f(6, &[&[1, 2, 3], &[4, 5, 6]]).clauses(), true);
        assert!(c.is_empty());
    }

    #[test]
    fn unit_subsumes_triple() {
        // (K).(A+K+L)
        let (c, _) = discover(f(3, &[&[2], &[1, 2, 3]]).clauses(), false);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind, CandidateKind::Subsume);
        assert_eq!(c[0].sources, [ClauseId(1), ClauseId(2)]);
    }

    #[test]
    fn unit_resolve_and_merge_on_opposite_units() {
        let (c, _) = discover(f(1, &[&[-1], &[1]]).clauses(), false);
        let kinds: Vec<_> = c.iter().map(|c| (c.kind, c.sources)).collect();
        assert_eq!(
            kinds,
            vec![
                (CandidateKind::UnitResolve, [ClauseId(1), ClauseId(2)]),
                (CandidateKind::Merge, [ClauseId(1), ClauseId(2)]),
            ]
        );
    }

    #[test]
    fn self_subsumption_only_when_enabled() {
        let clauses = f(3, &[&[1, 2, 3], &[-1, 2]]);
        assert!(discover(clauses.clauses(), false).0.is_empty());
        let (c, _) = discover(clauses.clauses(), true);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].kind, CandidateKind::SelfSubsume);
        assert_eq!(c[0].sources, [ClauseId(2), ClauseId(1)]);
        assert_eq!(c[0].pivot.to_dimacs(), -1);
    }

    #[test]
    fn both_backends_list_identical_candidates() {
        let clauses = f(
            4,
            &[
                &[1, 2, 3],
                &[1, 2, -3],
                &[-1],
                &[1, 2],
                &[2, -3, 4],
                &[-2, 4],
                &[-4, 3, 1],
                &[4],
            ],
        );
        for r4 in [false, true] {
            let (sorted, _) = discover(clauses.clauses(), r4);
            let (pairwise, pairs) = discover_pairwise(clauses.clauses(), r4);
            assert_eq!(sorted, pairwise);
            assert_eq!(pairs, 28);
        }
    }
}
