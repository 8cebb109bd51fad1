//! The arch-process DAG: shapes, actions, runs and run validation.

use crate::{Error, Result};

/// The pair `(n, k)` identifying an arch process: `k` arches over a trunk
/// whose arch endpoints are `n` trunk steps apart.
///
/// Valid for `0 <= k <= n+1`. At `k = n` the trunk has no `x` action left;
/// at `k = n+1` the last arch source and the first arch target collapse
/// into a single merged action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    n: u32,
    k: u32,
}

impl Shape {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if (k as u64) > (n as u64) + 1 {
            return Err(Error::InvalidShape { n, k });
        }
        Ok(Shape { n, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// True when `k = n+1` and the trunk actions `a_k` and `c_1` are one node.
    pub fn is_merged(&self) -> bool {
        self.k == self.n + 1
    }

    /// Number of `x` actions in the trunk.
    pub fn x_count(&self) -> u32 {
        if self.is_merged() {
            0
        } else {
            self.n - self.k
        }
    }

    /// Total number of actions: `n + 2k`, or `3k - 1` in the merged case.
    pub fn action_count(&self) -> u32 {
        if self.is_merged() {
            3 * self.k - 1
        } else {
            self.n + 2 * self.k
        }
    }
}

/// One action of an arch process.
///
/// Indices are 1-based. `Merged` only exists for shapes with `k = n+1`,
/// where it plays the role of both `a_k` and `c_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    A(u32),
    B(u32),
    C(u32),
    X(u32),
    Merged,
}

/// A totally ordered sequence of actions; see [`validate_run`] for the
/// conditions under which it is an actual run of a shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run(Vec<Action>);

impl Run {
    pub fn new(actions: Vec<Action>) -> Self {
        Run(actions)
    }

    pub fn actions(&self) -> &[Action] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Action> {
        self.0
    }
}

impl From<Vec<Action>> for Run {
    fn from(actions: Vec<Action>) -> Self {
        Run(actions)
    }
}

/// All actions of `shape` in canonical order: the trunk read from `a_1` to
/// `c_k` (with the merged node in place of the pair `a_k`, `c_1` when
/// `k = n+1`), followed by `b_1 … b_k`.
pub fn action_set(shape: Shape) -> Vec<Action> {
    let (n, k) = (shape.n(), shape.k());
    let mut out = Vec::with_capacity(shape.action_count() as usize);
    if shape.is_merged() {
        out.extend((1..k).map(Action::A));
        out.push(Action::Merged);
        out.extend((2..=k).map(Action::C));
    } else {
        out.extend((1..=k).map(Action::A));
        out.extend((1..=n - k).map(Action::X));
        out.extend((1..=k).map(Action::C));
    }
    out.extend((1..=k).map(Action::B));
    out
}

/// Position of `action` in the canonical order of `shape`, or `None` when
/// the action does not belong to the shape's action set.
pub fn canonical_index(shape: Shape, action: Action) -> Option<usize> {
    let (n, k) = (shape.n() as u64, shape.k() as u64);
    let merged = shape.is_merged();
    let idx = match action {
        Action::A(i) => {
            let hi = if merged { k - 1 } else { k };
            if i == 0 || (i as u64) > hi {
                return None;
            }
            i as u64 - 1
        }
        Action::Merged => {
            if !merged {
                return None;
            }
            k - 1
        }
        Action::X(j) => {
            if merged || j == 0 || (j as u64) > n - k {
                return None;
            }
            k + j as u64 - 1
        }
        Action::C(i) => {
            if merged {
                if i < 2 || (i as u64) > k {
                    return None;
                }
                k + i as u64 - 2
            } else {
                if i == 0 || (i as u64) > k {
                    return None;
                }
                n + i as u64 - 1
            }
        }
        Action::B(i) => {
            if i == 0 || (i as u64) > k {
                return None;
            }
            let trunk = if merged { 2 * k - 1 } else { n + k };
            trunk + i as u64 - 1
        }
    };
    Some(idx as usize)
}

/// The covering relation of the precedence DAG: the trunk chain plus the
/// two edges `source_i -> b_i -> target_i` of every arch. In the merged
/// case the chain passes through the merged node, which is also the source
/// of arch `k` and the target of arch `1`.
pub fn precedence_pairs(shape: Shape) -> Vec<(Action, Action)> {
    let k = shape.k();
    let set = action_set(shape);
    let trunk_len = (shape.action_count() - k) as usize;
    let mut out = Vec::with_capacity(trunk_len.saturating_sub(1) + 2 * k as usize);
    for w in set[..trunk_len].windows(2) {
        out.push((w[0], w[1]));
    }
    for i in 1..=k {
        let source = if shape.is_merged() && i == k {
            Action::Merged
        } else {
            Action::A(i)
        };
        let target = if shape.is_merged() && i == 1 {
            Action::Merged
        } else {
            Action::C(i)
        };
        out.push((source, Action::B(i)));
        out.push((Action::B(i), target));
    }
    out
}

/// True iff `run` is a permutation of the action set of `shape` that
/// respects every precedence pair. Malformed input yields `false`.
pub fn validate_run(shape: Shape, run: &Run) -> bool {
    let count = shape.action_count() as usize;
    if run.len() != count {
        return false;
    }
    let mut pos = vec![usize::MAX; count];
    for (p, &a) in run.actions().iter().enumerate() {
        match canonical_index(shape, a) {
            Some(ci) if pos[ci] == usize::MAX => pos[ci] = p,
            _ => return false,
        }
    }
    precedence_pairs(shape).into_iter().all(|(u, v)| {
        let iu = canonical_index(shape, u).expect("pair endpoints are in the action set");
        let iv = canonical_index(shape, v).expect("pair endpoints are in the action set");
        pos[iu] < pos[iv]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_run_text;

    #[test]
    fn shape_domain() {
        assert!(Shape::new(5, 4).is_ok());
        assert!(Shape::new(1, 2).is_ok());
        assert!(Shape::new(0, 0).is_ok());
        assert!(matches!(
            Shape::new(1, 3),
            Err(Error::InvalidShape { n: 1, k: 3 })
        ));
    }

    #[test]
    fn action_counts() {
        assert_eq!(Shape::new(5, 4).unwrap().action_count(), 13);
        assert_eq!(Shape::new(3, 0).unwrap().action_count(), 3);
        // merged case: 3k - 1
        assert_eq!(Shape::new(1, 2).unwrap().action_count(), 5);
    }

    #[test]
    fn action_set_canonical_order() {
        let s = Shape::new(5, 4).unwrap();
        let set = action_set(s);
        assert_eq!(set.len(), 13);
        assert_eq!(set[0], Action::A(1));
        assert_eq!(set[4], Action::X(1));
        assert_eq!(set[5], Action::C(1));
        assert_eq!(set[9], Action::B(1));

        let trunk_only = Shape::new(3, 0).unwrap();
        assert_eq!(
            action_set(trunk_only),
            vec![Action::X(1), Action::X(2), Action::X(3)]
        );

        let merged = Shape::new(1, 2).unwrap();
        assert_eq!(
            action_set(merged),
            vec![
                Action::A(1),
                Action::Merged,
                Action::C(2),
                Action::B(1),
                Action::B(2)
            ]
        );
    }

    #[test]
    fn canonical_index_roundtrip() {
        for shape in [
            Shape::new(5, 4).unwrap(),
            Shape::new(3, 0).unwrap(),
            Shape::new(1, 2).unwrap(),
            Shape::new(4, 4).unwrap(),
        ] {
            for (i, &a) in action_set(shape).iter().enumerate() {
                assert_eq!(canonical_index(shape, a), Some(i));
            }
        }
        let s = Shape::new(5, 4).unwrap();
        assert_eq!(canonical_index(s, Action::X(2)), None); // x2 does not exist
        assert_eq!(canonical_index(s, Action::Merged), None);
        assert_eq!(canonical_index(s, Action::A(0)), None);
        assert_eq!(canonical_index(s, Action::B(5)), None);
    }

    #[test]
    fn precedence_pairs_counts() {
        // 9 trunk actions -> 8 chain edges, plus 2 edges per arch
        let pairs = precedence_pairs(Shape::new(5, 4).unwrap());
        assert_eq!(pairs.len(), 16);

        let pairs = precedence_pairs(Shape::new(3, 0).unwrap());
        assert_eq!(
            pairs,
            vec![(Action::X(1), Action::X(2)), (Action::X(2), Action::X(3))]
        );
    }

    #[test]
    fn precedence_pairs_merged() {
        let pairs = precedence_pairs(Shape::new(1, 2).unwrap());
        let expected = vec![
            (Action::A(1), Action::Merged),
            (Action::Merged, Action::C(2)),
            (Action::A(1), Action::B(1)),
            (Action::B(1), Action::Merged),
            (Action::Merged, Action::B(2)),
            (Action::B(2), Action::C(2)),
        ];
        assert_eq!(pairs, expected);
    }

    #[test]
    fn validate_known_runs() {
        let s = Shape::new(5, 4).unwrap();
        let good = parse_run_text("a1 b1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4").unwrap();
        assert!(validate_run(s, &good));

        // swapping a1 and b1 violates a1 -> b1
        let bad = parse_run_text("b1 a1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4").unwrap();
        assert!(!validate_run(s, &bad));

        let s21 = Shape::new(2, 1).unwrap();
        let r = parse_run_text("a1 x1 b1 c1").unwrap();
        assert!(validate_run(s21, &r));
    }

    #[test]
    fn validate_rejects_malformed() {
        let s = Shape::new(2, 1).unwrap();
        // wrong length
        assert!(!validate_run(s, &parse_run_text("a1 x1 b1").unwrap()));
        // duplicate
        assert!(!validate_run(s, &parse_run_text("a1 a1 b1 c1").unwrap()));
        // foreign action
        assert!(!validate_run(s, &parse_run_text("a1 x2 b1 c1").unwrap()));
    }
}
