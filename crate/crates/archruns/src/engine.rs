//! Uniform random sampling, exact sampling probabilities, and the
//! ranking/unranking bijection, all for shapes with `1 <= k <= n`
//! (plus the trivial `k = 0` base).
//!
//! Both algorithms peel one arch per level, so they run in exactly `k`
//! steps over a frozen [`CountTable`] / [`PositionTable`]. A run of
//! `(n,k)` is obtained from a smaller run by exactly one of three edits:
//!
//! * [`Route::NewLastArch`] — the child's `x1` becomes `a_k`, `b_k` is
//!   inserted, `c_k` is appended at the end;
//! * [`Route::NewFirstArch`] — all arch labels shift up, the child's last
//!   `x` becomes `c1`, `b1` is inserted, `a1` is prepended;
//! * [`Route::TrunkArch`] — as above but the child has one more trunk
//!   action: `x_{p_b}` is renamed to `b1` instead of inserting it.
//!
//! "Insert at position p" always means the element occupies 1-based
//! position `p` right after insertion, before the head-prepend or
//! tail-append of the same step.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::counting::{CountTable, PositionTable};
use crate::model::{validate_run, Action, Run, Shape};
use crate::random::RandomSource;
use crate::{Error, Result};

/// How a run arises from the run of a smaller shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Child `(n, k-1)`; a new arch is appended after everything else.
    /// `p_b` is the insertion position of `b_k`, strictly after the child's
    /// `x1` (which becomes `a_k`).
    NewLastArch,
    /// Child `(n, k-1)`; a new first arch wraps the run. `p_b` is the
    /// insertion position of `b1`, at or before the child's `x1`.
    NewFirstArch,
    /// Child `(n+1, k-1)`; the new `b1` is the child's trunk action
    /// `x_{p_b}` (an index, not an insertion position), `2 <= p_b <= n-k+1`.
    TrunkArch,
}

/// One inverse derivation step of a run.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub route: Route,
    pub p_b: usize,
    pub parent_shape: Shape,
    pub parent: Run,
}

fn position_of(run: &[Action], target: Action) -> Option<usize> {
    run.iter().position(|&a| a == target).map(|p| p + 1)
}

// ---- forward edits: child run -> parent run (one more arch) ----

/// `(n, k-1)` run -> `(n, k)` run via the last-arch route.
fn grow_last_arch(run: &mut Vec<Action>, k: u32, p_b: usize) {
    for a in run.iter_mut() {
        *a = match *a {
            Action::X(1) => Action::A(k),
            Action::X(i) => Action::X(i - 1),
            other => other,
        };
    }
    run.insert(p_b - 1, Action::B(k));
    run.push(Action::C(k));
}

/// `(n, k-1)` run -> `(n, k)` run via the first-arch route.
fn grow_first_arch(run: &mut Vec<Action>, n: u32, k: u32, p_b: usize) {
    let last_x = n - k + 1; // the child's last trunk x, which becomes c1
    for a in run.iter_mut() {
        *a = match *a {
            Action::A(i) => Action::A(i + 1),
            Action::B(i) => Action::B(i + 1),
            Action::C(i) => Action::C(i + 1),
            Action::X(i) if i == last_x => Action::C(1),
            other => other,
        };
    }
    run.insert(p_b - 1, Action::B(1));
    run.insert(0, Action::A(1));
}

/// `(n+1, k-1)` run -> `(n, k)` run via the trunk route.
fn grow_trunk_arch(run: &mut Vec<Action>, n: u32, k: u32, p_b: u32) {
    let last_x = n - k + 2; // the child's last trunk x, which becomes c1
    for a in run.iter_mut() {
        *a = match *a {
            Action::A(i) => Action::A(i + 1),
            Action::B(i) => Action::B(i + 1),
            Action::C(i) => Action::C(i + 1),
            Action::X(i) if i == p_b => Action::B(1),
            Action::X(i) if i == last_x => Action::C(1),
            Action::X(i) if i > p_b => Action::X(i - 1),
            other => other,
        };
    }
    run.insert(0, Action::A(1));
}

// ---- inverse edits: parent run -> child run, returning p_b ----

/// Inverse of [`grow_last_arch`] on a valid `(n, k)` run.
fn strip_last_arch(run: &mut Vec<Action>, k: u32) -> usize {
    let last = run.pop();
    debug_assert_eq!(last, Some(Action::C(k)), "c_k is the unique maximum");
    let p_b = position_of(run, Action::B(k)).expect("valid run contains b_k");
    run.remove(p_b - 1);
    for a in run.iter_mut() {
        *a = match *a {
            Action::A(i) if i == k => Action::X(1),
            Action::X(i) => Action::X(i + 1),
            other => other,
        };
    }
    p_b
}

/// Inverse of [`grow_first_arch`] on a valid `(n, k)` run whose `b1`
/// precedes the action playing the `x1` role.
fn strip_first_arch(run: &mut Vec<Action>, n: u32, k: u32) -> usize {
    let head = run.remove(0);
    debug_assert_eq!(head, Action::A(1), "a1 is the unique minimum");
    let p_b = position_of(run, Action::B(1)).expect("valid run contains b1");
    run.remove(p_b - 1);
    let last_x = n - k + 1;
    for a in run.iter_mut() {
        *a = match *a {
            Action::A(i) => Action::A(i - 1),
            Action::B(i) => Action::B(i - 1),
            Action::C(1) => Action::X(last_x),
            Action::C(i) => Action::C(i - 1),
            other => other,
        };
    }
    p_b
}

/// Inverse of [`grow_trunk_arch`] on a valid `(n, k)` run whose `b1`
/// follows `x1`.
fn strip_trunk_arch(run: &mut Vec<Action>, n: u32, k: u32) -> u32 {
    let head = run.remove(0);
    debug_assert_eq!(head, Action::A(1), "a1 is the unique minimum");
    let b_pos = position_of(run, Action::B(1)).expect("valid run contains b1");
    let p_b = 1 + run[..b_pos - 1]
        .iter()
        .filter(|a| matches!(a, Action::X(_)))
        .count() as u32;
    let last_x = n - k + 2;
    for a in run.iter_mut() {
        *a = match *a {
            Action::A(i) => Action::A(i - 1),
            Action::B(1) => Action::X(p_b),
            Action::B(i) => Action::B(i - 1),
            Action::C(1) => Action::X(last_x),
            Action::C(i) => Action::C(i - 1),
            Action::X(i) if i >= p_b => Action::X(i + 1),
            other => other,
        };
    }
    p_b
}

/// The action whose final position classifies a run of `(n, k)`: `x1`,
/// or `c1` when the trunk has no `x` left.
fn pivot_action(n: u32, k: u32) -> Action {
    if k == n {
        Action::C(1)
    } else {
        Action::X(1)
    }
}

enum SampleStep {
    Arch { p_b: usize },
    Trunk { p_b: u32 },
}

/// Draws a uniformly distributed run of `shape`, in `k` levels.
///
/// At each level one random integer in `[0, 2 t(n,k))` is drawn; the
/// unused remainder of the division by the child count is discarded, which
/// is exactly the probability structure [`sample_probability`] encodes.
pub fn sample(table: &CountTable, shape: Shape, rng: &mut dyn RandomSource) -> Result<Run> {
    sample_traced(table, shape, rng, None)
}

pub(crate) fn sample_traced(
    table: &CountTable,
    shape: Shape,
    rng: &mut dyn RandomSource,
    mut trace: Option<&mut Vec<(u32, u32)>>,
) -> Result<Run> {
    let (n, k) = (shape.n(), shape.k());
    if k > n {
        return Err(Error::UnsupportedShape { n, k });
    }
    // top-down: pick a branch and a b-position at every level
    let mut steps = Vec::with_capacity(k as usize);
    let (mut cn, mut ck) = (n, k);
    while ck > 0 {
        if let Some(t) = trace.as_deref_mut() {
            t.push((ck, cn));
        }
        let t_here = table.get(cn, ck)?;
        let t_arch = table.get(cn, ck - 1)?;
        let r = rng.uniform_below(&(t_here * 2u32));
        let arch_weight = t_arch * BigUint::from(cn as u64 + 2 * ck as u64 - 1);
        if r < arch_weight {
            let p_b = 1 + (&r / t_arch).to_u64().expect("p_b fits in u64") as usize;
            steps.push(SampleStep::Arch { p_b });
            ck -= 1;
        } else {
            let t_trunk = table.get(cn + 1, ck - 1)?;
            let p_b = 2
                + ((&r - arch_weight) / t_trunk)
                    .to_u64()
                    .expect("p_b fits in u64") as u32;
            steps.push(SampleStep::Trunk { p_b });
            cn += 1;
            ck -= 1;
        }
    }
    if let Some(t) = trace {
        t.push((0, cn));
    }
    // bottom-up: rebuild the run, resolving arch steps against the child's x1
    let mut run: Vec<Action> = (1..=cn).map(Action::X).collect();
    for step in steps.into_iter().rev() {
        match step {
            SampleStep::Arch { p_b } => {
                ck += 1;
                let p_x1 =
                    position_of(&run, Action::X(1)).expect("child run always contains x1 here");
                if p_b > p_x1 {
                    grow_last_arch(&mut run, ck, p_b);
                } else {
                    grow_first_arch(&mut run, cn, ck, p_b);
                }
            }
            SampleStep::Trunk { p_b } => {
                ck += 1;
                cn -= 1;
                grow_trunk_arch(&mut run, cn, ck, p_b);
            }
        }
    }
    Ok(Run::new(run))
}

/// The deduplicated `(k', n')` cells touched across `count` samples, in
/// first-touch order; ready for scatter export.
pub fn visited_cells(
    table: &CountTable,
    shape: Shape,
    rng: &mut dyn RandomSource,
    count: u64,
) -> Result<Vec<(u32, u32)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut trace = Vec::with_capacity(shape.k() as usize + 1);
    for _ in 0..count {
        trace.clear();
        sample_traced(table, shape, rng, Some(&mut trace))?;
        for &cell in &trace {
            if seen.insert(cell) {
                out.push(cell);
            }
        }
    }
    Ok(out)
}

/// Every inverse derivation of `run`: the unique last-arch one, plus
/// exactly one of the first-arch/trunk pair. Requires a valid run and
/// `k <= n`; a `k = 0` run has no derivation.
pub fn derivations(shape: Shape, run: &Run) -> Result<Vec<Derivation>> {
    let (n, k) = (shape.n(), shape.k());
    if k > n {
        return Err(Error::UnsupportedShape { n, k });
    }
    if !validate_run(shape, run) {
        return Err(Error::InvalidRun(format!(
            "not a run of the ({n},{k})-arch process: {run}"
        )));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(2);

    let mut w = run.actions().to_vec();
    let p_b = strip_last_arch(&mut w, k);
    let parent_shape = Shape::new(n, k - 1)?;
    let parent = Run::new(w);
    assert!(
        validate_run(parent_shape, &parent),
        "last-arch inverse produced an invalid parent"
    );
    out.push(Derivation {
        route: Route::NewLastArch,
        p_b,
        parent_shape,
        parent,
    });

    let pivot = position_of(run.actions(), pivot_action(n, k)).expect("pivot is present");
    let b1 = position_of(run.actions(), Action::B(1)).expect("b1 is present");
    if b1 < pivot {
        let mut w = run.actions().to_vec();
        let p_b = strip_first_arch(&mut w, n, k);
        let parent_shape = Shape::new(n, k - 1)?;
        let parent = Run::new(w);
        assert!(
            validate_run(parent_shape, &parent),
            "first-arch inverse produced an invalid parent"
        );
        out.push(Derivation {
            route: Route::NewFirstArch,
            p_b,
            parent_shape,
            parent,
        });
    } else {
        let mut w = run.actions().to_vec();
        let p_b = strip_trunk_arch(&mut w, n, k);
        let parent_shape = Shape::new(n + 1, k - 1)?;
        let parent = Run::new(w);
        assert!(
            validate_run(parent_shape, &parent),
            "trunk inverse produced an invalid parent"
        );
        out.push(Derivation {
            route: Route::TrunkArch,
            p_b: p_b as usize,
            parent_shape,
            parent,
        });
    }
    Ok(out)
}

/// Exact probability that [`sample`] outputs `run`, computed by summing
/// `t(parent)/(2 t(n,k)) * P(parent)` over all inverse derivations. This
/// recursion is independent of the sampler's own code path, so equality
/// with `1/t(n,k)` is a real uniformity check. Cost grows like `2^k`;
/// meant for small shapes.
pub fn sample_probability(table: &CountTable, shape: Shape, run: &Run) -> Result<BigRational> {
    if shape.k() > shape.n() {
        return Err(Error::UnsupportedShape {
            n: shape.n(),
            k: shape.k(),
        });
    }
    if !validate_run(shape, run) {
        return Err(Error::InvalidRun(format!(
            "not a run of the ({},{})-arch process: {run}",
            shape.n(),
            shape.k()
        )));
    }
    prob_rec(table, shape, run)
}

fn prob_rec(table: &CountTable, shape: Shape, run: &Run) -> Result<BigRational> {
    if shape.k() == 0 {
        return Ok(BigRational::one());
    }
    let double_total = table.get(shape.n(), shape.k())? * 2u32;
    let mut total = BigRational::zero();
    for d in derivations(shape, run)? {
        let parent_count = table.get(d.parent_shape.n(), d.parent_shape.k())?;
        let weight = BigRational::new(parent_count.clone().into(), double_total.clone().into());
        total += weight * prob_rec(table, d.parent_shape, &d.parent)?;
    }
    Ok(total)
}

enum ConsStep {
    First { p_b: usize },
    Trunk { p_b: u32 },
}

/// The `rank`-th run of `shape` in the position-major total order:
/// runs are sorted by the final position of `x1` (`c1` when `k = n`),
/// then first-arch constructions before trunk ones, then by `p_b`, then
/// recursively by the child's rank.
pub fn unrank(
    ptable: &PositionTable,
    table: &CountTable,
    shape: Shape,
    rank: &BigUint,
) -> Result<Run> {
    let (n, k) = (shape.n(), shape.k());
    if k > n {
        return Err(Error::UnsupportedShape { n, k });
    }
    let total = table.get(n, k)?;
    if rank >= total {
        return Err(Error::RankOutOfRange {
            rank: rank.to_string(),
            total: total.to_string(),
        });
    }
    if k == 0 {
        return Ok(Run::new((1..=n).map(Action::X).collect()));
    }

    // outer scan: find the position class this rank falls in
    let mut r = rank.clone();
    let (lo, hi) = PositionTable::position_range(k);
    let mut ell = 0;
    for l in lo..=hi {
        let tl = ptable.get(n, k, l)?;
        if r < tl {
            ell = l;
            break;
        }
        r -= tl;
    }
    assert!(
        ell > 0,
        "rank below t(n,k) must fall in some position class"
    );

    // walk down, recording one construction step per level
    let mut steps = Vec::with_capacity(k as usize);
    let (mut cn, mut ck, mut cl) = (n, k, ell);
    while ck > 0 {
        let t_first = ptable.get(cn, ck - 1, cl - 2)?;
        let first_weight = &t_first * BigUint::from(cl - 2);
        if r < first_weight {
            let p_b = 1 + (&r / &t_first).to_u64().expect("p_b fits in u64") as usize;
            r %= &t_first;
            steps.push(ConsStep::First { p_b });
            ck -= 1;
            cl -= 2;
        } else {
            let rp = &r - first_weight;
            let t_trunk = ptable.get(cn + 1, ck - 1, cl - 1)?;
            let p_b = 2 + (&rp / &t_trunk).to_u64().expect("p_b fits in u64") as u32;
            r = rp % &t_trunk;
            steps.push(ConsStep::Trunk { p_b });
            cn += 1;
            ck -= 1;
            cl -= 1;
        }
    }
    debug_assert!(cl == 1 && r.is_zero());

    // bottom-up rebuild
    let mut run: Vec<Action> = (1..=cn).map(Action::X).collect();
    for step in steps.into_iter().rev() {
        match step {
            ConsStep::First { p_b } => {
                ck += 1;
                grow_first_arch(&mut run, cn, ck, p_b);
            }
            ConsStep::Trunk { p_b } => {
                ck += 1;
                cn -= 1;
                grow_trunk_arch(&mut run, cn, ck, p_b);
            }
        }
    }
    Ok(Run::new(run))
}

/// The unique rank `r` with `unrank(r) = run`; inverse of [`unrank`].
pub fn rank(
    ptable: &PositionTable,
    table: &CountTable,
    shape: Shape,
    run: &Run,
) -> Result<BigUint> {
    let (n, k) = (shape.n(), shape.k());
    if k > n {
        return Err(Error::UnsupportedShape { n, k });
    }
    if !validate_run(shape, run) {
        return Err(Error::InvalidRun(format!(
            "not a run of the ({n},{k})-arch process: {run}"
        )));
    }
    let _ = table.get(n, k)?; // surface table/shape mismatches early
    if k == 0 {
        return Ok(BigUint::zero());
    }

    let mut acc = BigUint::zero();
    let mut cur = run.actions().to_vec();
    let (mut cn, mut ck) = (n, k);

    // prefix of whole position classes below this run's class
    let ell = position_of(&cur, pivot_action(cn, ck)).expect("pivot is present") as u64;
    let (lo, _) = PositionTable::position_range(k);
    for l in lo..ell {
        acc += ptable.get(n, k, l)?;
    }

    while ck > 0 {
        let cl = position_of(&cur, pivot_action(cn, ck)).expect("pivot is present") as u64;
        let b1 = position_of(&cur, Action::B(1)).expect("b1 is present") as u64;
        if b1 < cl {
            let p_b = strip_first_arch(&mut cur, cn, ck);
            acc += ptable.get(cn, ck - 1, cl - 2)? * BigUint::from(p_b as u64 - 1);
            ck -= 1;
        } else {
            acc += ptable.get(cn, ck - 1, cl - 2)? * BigUint::from(cl - 2);
            let p_b = strip_trunk_arch(&mut cur, cn, ck);
            acc += ptable.get(cn + 1, ck - 1, cl - 1)? * BigUint::from(p_b as u64 - 2);
            cn += 1;
            ck -= 1;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::enumerate_runs;
    use crate::counting::{build_count_table, build_position_table};
    use crate::random::ChaChaSource;
    use crate::text::parse_run_text;
    use num_traits::FromPrimitive;
    use std::collections::HashSet;

    fn fig_run() -> Run {
        parse_run_text("a1 b1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4").unwrap()
    }

    #[test]
    fn base_case_sample() {
        let table = build_count_table(4, 0).unwrap();
        let shape = Shape::new(4, 0).unwrap();
        let mut rng = ChaChaSource::from_seed_u64(0);
        let run = sample(&table, shape, &mut rng).unwrap();
        assert_eq!(run, parse_run_text("x1 x2 x3 x4").unwrap());
    }

    #[test]
    fn sample_rejects_k_above_n() {
        // merged shapes still count fine, but sampling stops at k = n
        let table = build_count_table(3, 4).unwrap();
        let shape = Shape::new(3, 4).unwrap();
        let mut rng = ChaChaSource::from_seed_u64(0);
        assert!(matches!(
            sample(&table, shape, &mut rng),
            Err(Error::UnsupportedShape { .. })
        ));
    }

    #[test]
    fn samples_validate_and_vary() {
        for (n, k) in [(5u32, 4u32), (4, 4), (7, 3), (6, 6)] {
            let shape = Shape::new(n, k).unwrap();
            let table = build_count_table(n, k).unwrap();
            let mut rng = ChaChaSource::from_seed_u64(99);
            let mut distinct = HashSet::new();
            for _ in 0..200 {
                let run = sample(&table, shape, &mut rng).unwrap();
                assert!(validate_run(shape, &run), "invalid sample for ({n},{k})");
                distinct.insert(run);
            }
            assert!(distinct.len() > 10);
        }
    }

    #[test]
    fn fig_run_has_exactly_the_two_printed_derivations() {
        let shape = Shape::new(5, 4).unwrap();
        let ds = derivations(shape, &fig_run()).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[0].route, Route::NewLastArch);
        assert_eq!(ds[0].p_b, 8);
        assert_eq!(
            ds[0].parent,
            parse_run_text("a1 b1 a2 a3 b3 x1 x2 c1 b2 c2 c3").unwrap()
        );
        assert_eq!(ds[1].route, Route::NewFirstArch);
        assert_eq!(ds[1].p_b, 1);
        assert_eq!(
            ds[1].parent,
            parse_run_text("a1 a2 b2 a3 x1 b3 x2 b1 c1 c2 c3").unwrap()
        );
    }

    #[test]
    fn every_run_has_exactly_two_derivations() {
        for (n, k) in [(2u32, 2u32), (4, 3), (4, 4)] {
            let shape = Shape::new(n, k).unwrap();
            for run in enumerate_runs(shape, 10_000).unwrap() {
                assert_eq!(derivations(shape, &run).unwrap().len(), 2);
            }
        }
    }

    #[test]
    fn doubling_identity() {
        // Each derivation owns an r-interval of width t(parent shape), and
        // the recursion picks its specific parent with probability
        // 1/t(parent shape), so every derivation carries measure exactly 1:
        // over all runs the derivation count must be 2 t(n,k). The route
        // split must also match the slot counts of the recurrence.
        let shape = Shape::new(5, 4).unwrap();
        let table = build_count_table(5, 4).unwrap();
        let mut total = 0u64;
        let (mut last, mut first, mut trunk) = (0u64, 0u64, 0u64);
        for run in enumerate_runs(shape, 10_000).unwrap() {
            for d in derivations(shape, &run).unwrap() {
                total += 1;
                match d.route {
                    Route::NewLastArch => last += 1,
                    Route::NewFirstArch => first += 1,
                    Route::TrunkArch => trunk += 1,
                }
            }
        }
        assert_eq!(BigUint::from(total), table.total() * 2u32);
        // every run ends the last-arch way exactly once
        assert_eq!(BigUint::from(last), table.total().clone());
        // trunk derivations: (n-k) slots of t(n+1, k-1) children each
        assert_eq!(
            BigUint::from(trunk),
            table.get(6, 3).unwrap() * BigUint::from(5u32 - 4)
        );
        assert_eq!(BigUint::from(first + trunk), table.total().clone());
    }

    #[test]
    fn exact_uniform_probability_small() {
        for (n, k) in [(2u32, 2u32), (4, 3)] {
            let shape = Shape::new(n, k).unwrap();
            let table = build_count_table(n, k).unwrap();
            let expected = BigRational::new(1.into(), table.total().clone().into());
            for run in enumerate_runs(shape, 10_000).unwrap() {
                assert_eq!(sample_probability(&table, shape, &run).unwrap(), expected);
            }
        }
    }

    #[test]
    fn probability_of_trivial_run_is_one() {
        let shape = Shape::new(5, 0).unwrap();
        let table = build_count_table(5, 0).unwrap();
        let run = parse_run_text("x1 x2 x3 x4 x5").unwrap();
        assert_eq!(
            sample_probability(&table, shape, &run).unwrap(),
            BigRational::from_u64(1).unwrap()
        );
    }

    #[test]
    fn unrank_anchor_example() {
        let shape = Shape::new(5, 4).unwrap();
        let table = build_count_table(5, 4).unwrap();
        let ptable = build_position_table(5, 4).unwrap();
        let run = unrank(&ptable, &table, shape, &BigUint::from(479u32)).unwrap();
        assert_eq!(run, fig_run());
        assert_eq!(
            rank(&ptable, &table, shape, &fig_run()).unwrap(),
            BigUint::from(479u32)
        );
    }

    #[test]
    fn unrank_base_case() {
        let shape = Shape::new(3, 0).unwrap();
        let table = build_count_table(3, 0).unwrap();
        let ptable = build_position_table(3, 0).unwrap();
        let run = unrank(&ptable, &table, shape, &BigUint::zero()).unwrap();
        assert_eq!(run, parse_run_text("x1 x2 x3").unwrap());
        assert_eq!(rank(&ptable, &table, shape, &run).unwrap(), BigUint::zero());
        assert!(unrank(&ptable, &table, shape, &BigUint::from(1u32)).is_err());
    }

    #[test]
    fn unrank_bijection_small() {
        for (n, k) in [(2u32, 2u32), (4, 3), (1, 1), (3, 3)] {
            let shape = Shape::new(n, k).unwrap();
            let table = build_count_table(n, k).unwrap();
            let ptable = build_position_table(n, k).unwrap();
            let total = table.total().to_u64().unwrap();
            let oracle: HashSet<Run> = enumerate_runs(shape, 10_000).unwrap().into_iter().collect();
            let mut seen = HashSet::new();
            for r in 0..total {
                let rr = BigUint::from(r);
                let run = unrank(&ptable, &table, shape, &rr).unwrap();
                assert!(validate_run(shape, &run));
                assert!(oracle.contains(&run));
                assert!(seen.insert(run.clone()), "unrank not injective at {r}");
                assert_eq!(rank(&ptable, &table, shape, &run).unwrap(), rr);
            }
            assert_eq!(seen.len(), oracle.len());
        }
    }

    #[test]
    fn unrank_order_is_position_monotone() {
        let shape = Shape::new(4, 3).unwrap();
        let table = build_count_table(4, 3).unwrap();
        let ptable = build_position_table(4, 3).unwrap();
        let mut last = 0;
        for r in 0..100u64 {
            let run = unrank(&ptable, &table, shape, &BigUint::from(r)).unwrap();
            let p = position_of(run.actions(), Action::X(1)).unwrap();
            assert!(p >= last, "x1 position decreased at rank {r}");
            last = p;
        }
    }

    #[test]
    fn rank_errors() {
        let shape = Shape::new(2, 2).unwrap();
        let table = build_count_table(2, 2).unwrap();
        let ptable = build_position_table(2, 2).unwrap();
        assert!(matches!(
            unrank(&ptable, &table, shape, &BigUint::from(5u32)),
            Err(Error::RankOutOfRange { .. })
        ));
        let not_a_run = parse_run_text("a1 a2 c1 b1 b2 c2").unwrap();
        assert!(matches!(
            rank(&ptable, &table, shape, &not_a_run),
            Err(Error::InvalidRun(_))
        ));
    }

    #[test]
    fn rank_of_single_run_shapes() {
        let shape = Shape::new(1, 1).unwrap();
        let table = build_count_table(1, 1).unwrap();
        let ptable = build_position_table(1, 1).unwrap();
        let run = parse_run_text("a1 b1 c1").unwrap();
        assert_eq!(rank(&ptable, &table, shape, &run).unwrap(), BigUint::zero());
    }

    #[test]
    fn visited_cells_stay_in_triangle() {
        let shape = Shape::new(10, 7).unwrap();
        let table = build_count_table(10, 7).unwrap();
        let mut rng = ChaChaSource::from_seed_u64(3);
        let cells = visited_cells(&table, shape, &mut rng, 100).unwrap();
        for (kp, np) in cells {
            assert!((10..=17).contains(&np));
            assert!(kp <= 7 - (np - 10));
        }
        // trivial shape touches only the base cell
        let shape0 = Shape::new(4, 0).unwrap();
        let table0 = build_count_table(4, 0).unwrap();
        let cells = visited_cells(&table0, shape0, &mut rng, 5).unwrap();
        assert_eq!(cells, vec![(0, 4)]);
    }
}
