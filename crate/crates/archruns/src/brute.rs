//! Brute-force linear-extension oracle.
//!
//! Enumerates every run of a shape by backtracking over the currently
//! minimal actions, always tried in canonical order, so the output is
//! deterministic and lexicographically increasing. This grounds the
//! counting recurrence and the unranking bijection.

use num_bigint::BigUint;

use crate::model::{action_set, canonical_index, precedence_pairs, Action, Run, Shape};
use crate::{Error, Result};

struct Walker<'a, F> {
    actions: &'a [Action],
    succ: Vec<Vec<usize>>,
    indeg: Vec<u32>,
    used: Vec<bool>,
    stack: Vec<usize>,
    count: u64,
    cap: u64,
    visit: F,
}

impl<F: FnMut(&[Action])> Walker<'_, F> {
    fn go(&mut self, buf: &mut Vec<Action>) -> Result<()> {
        if self.stack.len() == self.actions.len() {
            self.count += 1;
            if self.count > self.cap {
                return Err(Error::CapExceeded { cap: self.cap });
            }
            buf.clear();
            buf.extend(self.stack.iter().map(|&i| self.actions[i]));
            (self.visit)(buf);
            return Ok(());
        }
        for c in 0..self.actions.len() {
            if self.used[c] || self.indeg[c] != 0 {
                continue;
            }
            self.used[c] = true;
            for i in 0..self.succ[c].len() {
                self.indeg[self.succ[c][i]] -= 1;
            }
            self.stack.push(c);
            let res = self.go(buf);
            self.stack.pop();
            for i in 0..self.succ[c].len() {
                self.indeg[self.succ[c][i]] += 1;
            }
            self.used[c] = false;
            res?;
        }
        Ok(())
    }
}

/// Visits every run of `shape` in lexicographic (canonical-order) order.
/// Errors out as soon as the number of runs would exceed `cap`.
pub fn walk_runs<F: FnMut(&[Action])>(shape: Shape, cap: u64, visit: F) -> Result<u64> {
    let actions = action_set(shape);
    let v = actions.len();
    let mut succ = vec![Vec::new(); v];
    let mut indeg = vec![0u32; v];
    for (a, b) in precedence_pairs(shape) {
        let ia = canonical_index(shape, a).expect("cover endpoints are in the action set");
        let ib = canonical_index(shape, b).expect("cover endpoints are in the action set");
        succ[ia].push(ib);
        indeg[ib] += 1;
    }
    let mut w = Walker {
        actions: &actions,
        succ,
        indeg,
        used: vec![false; v],
        stack: Vec::with_capacity(v),
        count: 0,
        cap,
        visit,
    };
    let mut buf = Vec::with_capacity(v);
    w.go(&mut buf)?;
    Ok(w.count)
}

/// All runs of `shape`, in deterministic lexicographic order.
pub fn enumerate_runs(shape: Shape, cap: u64) -> Result<Vec<Run>> {
    let mut out = Vec::new();
    walk_runs(shape, cap, |r| out.push(Run::new(r.to_vec())))?;
    Ok(out)
}

/// Number of runs of `shape`, counted by exhaustive enumeration.
pub fn count_runs_brute(shape: Shape, cap: u64) -> Result<BigUint> {
    walk_runs(shape, cap, |_| {}).map(BigUint::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_run;
    use crate::text::parse_run_text;
    use num_traits::ToPrimitive;
    use std::collections::HashSet;

    #[test]
    fn single_extension_shapes() {
        // one arch, no slack: a1 b1 c1 only
        let runs = enumerate_runs(Shape::new(1, 1).unwrap(), 10).unwrap();
        assert_eq!(runs, vec![parse_run_text("a1 b1 c1").unwrap()]);

        // a pure trunk always has a single run
        for n in 0..6 {
            assert_eq!(
                count_runs_brute(Shape::new(n, 0).unwrap(), 10)
                    .unwrap()
                    .to_u64(),
                Some(1)
            );
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(
            count_runs_brute(Shape::new(2, 2).unwrap(), 10)
                .unwrap()
                .to_u64(),
            Some(5)
        );
        assert_eq!(
            count_runs_brute(Shape::new(1, 2).unwrap(), 10)
                .unwrap()
                .to_u64(),
            Some(1)
        );
        assert_eq!(
            count_runs_brute(Shape::new(6, 1).unwrap(), 10)
                .unwrap()
                .to_u64(),
            Some(6)
        );
        // merged shape with a forced cycle has no run at all
        assert_eq!(
            count_runs_brute(Shape::new(0, 1).unwrap(), 10)
                .unwrap()
                .to_u64(),
            Some(0)
        );
    }

    #[test]
    fn runs_of_5_4() {
        let shape = Shape::new(5, 4).unwrap();
        let runs = enumerate_runs(shape, 2000).unwrap();
        assert_eq!(runs.len(), 1270);
        let mut seen = HashSet::new();
        for r in &runs {
            assert!(validate_run(shape, r));
            assert!(seen.insert(r.clone()), "duplicate run emitted");
        }
        let fig = parse_run_text("a1 b1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4").unwrap();
        assert!(seen.contains(&fig));
    }

    #[test]
    fn lexicographic_output() {
        let shape = Shape::new(4, 3).unwrap();
        let runs = enumerate_runs(shape, 1000).unwrap();
        let key = |r: &Run| -> Vec<usize> {
            r.actions()
                .iter()
                .map(|&a| canonical_index(shape, a).unwrap())
                .collect()
        };
        for w in runs.windows(2) {
            assert!(key(&w[0]) < key(&w[1]));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_runs(Shape::new(5, 4).unwrap(), 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 100 }));
    }
}
