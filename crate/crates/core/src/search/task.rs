//! Finite task specifications for strategy search: explicit input and
//! output sets, a relation given as a table of allowed quadruples, an
//! optional promise, and an input distribution.

use serde::Deserialize;

use crate::bits::BitString;
use crate::error::{Error, Result};

/// Probability weights over the input pairs.
#[derive(Debug, Clone, PartialEq)]
pub enum InputDistribution {
    /// Uniform over all of X×Y.
    UniformAll,
    /// Uniform over the promise-satisfying pairs (the default).
    UniformPromise,
    /// Explicit nonnegative weights, row-major over X×Y; normalized on
    /// construction.
    Explicit(Vec<f64>),
}

/// A relation R ⊆ X×Y×A×B with optional promise and input distribution.
#[derive(Debug, Clone)]
pub struct TaskSpec {
    pub name: String,
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    a_labels: Vec<String>,
    b_labels: Vec<String>,
    /// Flattened [x][y][a][b].
    allowed: Vec<bool>,
    /// Flattened [x][y]; `None` means no promise.
    promise: Option<Vec<bool>>,
    distribution: InputDistribution,
    /// Set for the matching-outputs builtin; unlocks the coloring reduction.
    dj_k: Option<usize>,
}

impl TaskSpec {
    /// Builds a task from predicates over set indices.
    pub fn from_predicates<R, P>(
        name: &str,
        labels: [Vec<String>; 4],
        relation: R,
        promise: Option<P>,
        distribution: InputDistribution,
    ) -> Result<TaskSpec>
    where
        R: Fn(usize, usize, usize, usize) -> bool,
        P: Fn(usize, usize) -> bool,
    {
        let [x_labels, y_labels, a_labels, b_labels] = labels;
        let (nx, ny, na, nb) = (
            x_labels.len(),
            y_labels.len(),
            a_labels.len(),
            b_labels.len(),
        );
        if nx == 0 || ny == 0 || na == 0 || nb == 0 {
            return Err(Error::Argument("all four sets must be nonempty".into()));
        }
        let mut allowed = vec![false; nx * ny * na * nb];
        for xi in 0..nx {
            for yi in 0..ny {
                for ai in 0..na {
                    for bi in 0..nb {
                        allowed[((xi * ny + yi) * na + ai) * nb + bi] = relation(xi, yi, ai, bi);
                    }
                }
            }
        }
        let promise_table = promise.map(|pred| {
            let mut table = vec![false; nx * ny];
            for xi in 0..nx {
                for yi in 0..ny {
                    table[xi * ny + yi] = pred(xi, yi);
                }
            }
            table
        });
        let task = TaskSpec {
            name: name.to_string(),
            x_labels,
            y_labels,
            a_labels,
            b_labels,
            allowed,
            promise: promise_table,
            distribution,
            dj_k: None,
        };
        task.check_distribution()?;
        Ok(task)
    }

    fn check_distribution(&self) -> Result<()> {
        match &self.distribution {
            InputDistribution::Explicit(weights) => {
                if weights.len() != self.nx() * self.ny() {
                    return Err(Error::Argument("weight table has the wrong size".into()));
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(Error::Argument(
                        "weights must be finite and nonnegative".into(),
                    ));
                }
                if weights.iter().sum::<f64>() <= 0.0 {
                    return Err(Error::Argument("weights must not all vanish".into()));
                }
            }
            InputDistribution::UniformPromise | InputDistribution::UniformAll => {
                if self.support().is_empty() {
                    return Err(Error::Argument("the distribution has empty support".into()));
                }
            }
        }
        Ok(())
    }

    pub fn nx(&self) -> usize {
        self.x_labels.len()
    }

    pub fn ny(&self) -> usize {
        self.y_labels.len()
    }

    pub fn na(&self) -> usize {
        self.a_labels.len()
    }

    pub fn nb(&self) -> usize {
        self.b_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    pub fn a_labels(&self) -> &[String] {
        &self.a_labels
    }

    pub fn b_labels(&self) -> &[String] {
        &self.b_labels
    }

    /// The coloring-reduction parameter when this is the matching-outputs
    /// builtin.
    pub fn dj_k(&self) -> Option<usize> {
        self.dj_k
    }

    pub fn relation(&self, xi: usize, yi: usize, ai: usize, bi: usize) -> bool {
        self.allowed[((xi * self.ny() + yi) * self.na() + ai) * self.nb() + bi]
    }

    /// True when (x, y) is in the promise (or there is none).
    pub fn promise_holds(&self, xi: usize, yi: usize) -> bool {
        self.promise
            .as_ref()
            .map(|t| t[xi * self.ny() + yi])
            .unwrap_or(true)
    }

    /// Normalized weights, row-major over X×Y.
    pub fn weights(&self) -> Vec<f64> {
        let (nx, ny) = (self.nx(), self.ny());
        match &self.distribution {
            InputDistribution::Explicit(weights) => {
                let total: f64 = weights.iter().sum();
                weights.iter().map(|w| w / total).collect()
            }
            named => {
                let mut weights = vec![0.0; nx * ny];
                let mut count = 0usize;
                for xi in 0..nx {
                    for yi in 0..ny {
                        let on = match named {
                            InputDistribution::UniformAll => true,
                            _ => self.promise_holds(xi, yi),
                        };
                        if on {
                            weights[xi * ny + yi] = 1.0;
                            count += 1;
                        }
                    }
                }
                for w in weights.iter_mut() {
                    *w /= count as f64;
                }
                weights
            }
        }
    }

    /// Input pairs carrying positive weight.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let ny = self.ny();
        match &self.distribution {
            InputDistribution::Explicit(weights) => weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w > 0.0)
                .map(|(i, _)| (i / ny, i % ny))
                .collect(),
            InputDistribution::UniformAll => (0..self.nx())
                .flat_map(|xi| (0..ny).map(move |yi| (xi, yi)))
                .collect(),
            InputDistribution::UniformPromise => (0..self.nx())
                .flat_map(|xi| (0..ny).map(move |yi| (xi, yi)))
                .filter(|&(xi, yi)| self.promise_holds(xi, yi))
                .collect(),
        }
    }

    /// True when every supported pair carries the same weight, which makes
    /// counts of satisfied pairs an exact success fraction.
    pub fn is_equiweighted(&self) -> bool {
        match &self.distribution {
            InputDistribution::Explicit(weights) => {
                let mut positive = weights.iter().filter(|w| **w > 0.0);
                match positive.next() {
                    None => true,
                    Some(first) => positive.all(|w| w == first),
                }
            }
            _ => true,
        }
    }

    /// The 1-bit equality task on `n`-bit strings: both parties must output
    /// 1 exactly when the inputs are equal. Uniform over all pairs.
    pub fn equality(n: usize) -> Result<TaskSpec> {
        let strings: Vec<String> = (0..(1usize << n))
            .map(|v| BitString::from_index(v, n).to_string())
            .collect();
        TaskSpec::from_predicates(
            "equality",
            [
                strings.clone(),
                strings,
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
            ],
            |xi, yi, ai, bi| {
                let answer = usize::from(xi == yi);
                ai == answer && bi == answer
            },
            None::<fn(usize, usize) -> bool>,
            InputDistribution::UniformAll,
        )
    }

    /// Receiver-side equality on `n`-bit strings: only Bob must announce
    /// whether the inputs match; Alice's output is a placeholder. One bit of
    /// communication already solves this one exactly when n = 1.
    pub fn equality_receiver(n: usize) -> Result<TaskSpec> {
        let strings: Vec<String> = (0..(1usize << n))
            .map(|v| BitString::from_index(v, n).to_string())
            .collect();
        TaskSpec::from_predicates(
            "equality-receiver",
            [
                strings.clone(),
                strings,
                vec!["-".into()],
                vec!["0".into(), "1".into()],
            ],
            |xi, yi, _ai, bi| bi == usize::from(xi == yi),
            None::<fn(usize, usize) -> bool>,
            InputDistribution::UniformAll,
        )
    }

    /// The matching-outputs relation at parameter k: inputs of length
    /// n = 2^k, outputs of length k; equal inputs need equal outputs, inputs
    /// at distance n/2 need different outputs, anything else is off-promise.
    pub fn dj(k: usize) -> Result<TaskSpec> {
        if k == 0 || k > 3 {
            return Err(Error::Argument(
                "the matching-outputs builtin supports 1 ≤ k ≤ 3".into(),
            ));
        }
        let n = 1usize << k;
        let inputs: Vec<String> = (0..(1usize << n))
            .map(|v| BitString::from_index(v, n).to_string())
            .collect();
        let outputs: Vec<String> = (0..(1usize << k))
            .map(|v| BitString::from_index(v, k).to_string())
            .collect();
        let delta = move |xi: usize, yi: usize| (xi ^ yi).count_ones() as usize;
        let mut task = TaskSpec::from_predicates(
            "dj",
            [inputs.clone(), inputs, outputs.clone(), outputs],
            move |xi, yi, ai, bi| match delta(xi, yi) {
                0 => ai == bi,
                d if d == n / 2 => ai != bi,
                _ => true,
            },
            Some(move |xi: usize, yi: usize| {
                let d = delta(xi, yi);
                d == 0 || d == n / 2
            }),
            InputDistribution::UniformPromise,
        )?;
        task.dj_k = Some(k);
        Ok(task)
    }

    /// The two-bit parity task: both parties must output the parity of
    /// x₁y₁ + x₂y₂. `nonzero_inputs_only` switches the distribution from
    /// uniform over all 16 pairs to uniform over the 9 pairs where both
    /// inputs are nonzero.
    pub fn cvdnt(nonzero_inputs_only: bool) -> Result<TaskSpec> {
        let strings: Vec<String> = (0..4usize)
            .map(|v| BitString::from_index(v, 2).to_string())
            .collect();
        let parity = |xi: usize, yi: usize| -> usize {
            let (x1, x2) = (xi >> 1, xi & 1);
            let (y1, y2) = (yi >> 1, yi & 1);
            (x1 * y1 + x2 * y2) % 2
        };
        let distribution = if nonzero_inputs_only {
            let mut weights = vec![0.0; 16];
            for xi in 1..4 {
                for yi in 1..4 {
                    weights[xi * 4 + yi] = 1.0 / 9.0;
                }
            }
            InputDistribution::Explicit(weights)
        } else {
            InputDistribution::UniformAll
        };
        TaskSpec::from_predicates(
            if nonzero_inputs_only {
                "cvdnt-nonzero"
            } else {
                "cvdnt"
            },
            [
                strings.clone(),
                strings,
                vec!["0".into(), "1".into()],
                vec!["0".into(), "1".into()],
            ],
            move |xi, yi, ai, bi| ai == parity(xi, yi) && bi == parity(xi, yi),
            None::<fn(usize, usize) -> bool>,
            distribution,
        )
    }

    /// Parses a task from its JSON document form: explicit element lists,
    /// the relation as a table of allowed quadruples, an optional promise
    /// pair list, and an optional distribution (named or explicit weights).
    pub fn from_json(text: &str) -> Result<TaskSpec> {
        let doc: TaskJson =
            serde_json::from_str(text).map_err(|e| Error::Argument(format!("task JSON: {e}")))?;
        let find = |labels: &[String], label: &str, set: &str| -> Result<usize> {
            labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Argument(format!("unknown {set} element {label:?}")))
        };
        for (set, labels) in [("x", &doc.x), ("y", &doc.y), ("a", &doc.a), ("b", &doc.b)] {
            for (i, label) in labels.iter().enumerate() {
                if labels[..i].contains(label) {
                    return Err(Error::Argument(format!(
                        "duplicate {set} element {label:?}"
                    )));
                }
            }
        }

        let (nx, ny, na, nb) = (doc.x.len(), doc.y.len(), doc.a.len(), doc.b.len());
        if nx == 0 || ny == 0 || na == 0 || nb == 0 {
            return Err(Error::Argument("all four sets must be nonempty".into()));
        }
        let mut allowed = vec![false; nx * ny * na * nb];
        for quad in &doc.allowed {
            let [x, y, a, b] = quad;
            let (xi, yi) = (find(&doc.x, x, "x")?, find(&doc.y, y, "y")?);
            let (ai, bi) = (find(&doc.a, a, "a")?, find(&doc.b, b, "b")?);
            allowed[((xi * ny + yi) * na + ai) * nb + bi] = true;
        }
        let promise = match &doc.promise {
            None => None,
            Some(pairs) => {
                let mut table = vec![false; nx * ny];
                for [x, y] in pairs {
                    table[find(&doc.x, x, "x")? * ny + find(&doc.y, y, "y")?] = true;
                }
                Some(table)
            }
        };
        let distribution = match doc.distribution {
            None => InputDistribution::UniformPromise,
            Some(DistributionJson::Named(name)) => match name.as_str() {
                "uniform-all" => InputDistribution::UniformAll,
                "uniform-promise" => InputDistribution::UniformPromise,
                other => return Err(Error::Argument(format!("unknown distribution {other:?}"))),
            },
            Some(DistributionJson::Explicit(rows)) => {
                let mut weights = vec![0.0; nx * ny];
                for row in rows {
                    weights[find(&doc.x, &row.x, "x")? * ny + find(&doc.y, &row.y, "y")?] = row.w;
                }
                InputDistribution::Explicit(weights)
            }
        };
        let task = TaskSpec {
            name: doc.name.unwrap_or_else(|| "custom".into()),
            x_labels: doc.x,
            y_labels: doc.y,
            a_labels: doc.a,
            b_labels: doc.b,
            allowed,
            promise,
            distribution,
            dj_k: None,
        };
        task.check_distribution()?;
        Ok(task)
    }
}

#[derive(Deserialize)]
struct TaskJson {
    #[serde(default)]
    name: Option<String>,
    x: Vec<String>,
    y: Vec<String>,
    a: Vec<String>,
    b: Vec<String>,
    allowed: Vec<[String; 4]>,
    #[serde(default)]
    promise: Option<Vec<[String; 2]>>,
    #[serde(default)]
    distribution: Option<DistributionJson>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DistributionJson {
    Named(String),
    Explicit(Vec<ExplicitWeight>),
}

#[derive(Deserialize)]
struct ExplicitWeight {
    x: String,
    y: String,
    w: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_task_shape() {
        let task = TaskSpec::equality(1).unwrap();
        assert_eq!((task.nx(), task.ny(), task.na(), task.nb()), (2, 2, 2, 2));
        assert!(task.relation(0, 0, 1, 1));
        assert!(!task.relation(0, 1, 1, 1));
        assert!(task.relation(0, 1, 0, 0));
        assert_eq!(task.support().len(), 4);
    }

    #[test]
    fn dj_task_promise_and_relation() {
        let task = TaskSpec::dj(2).unwrap();
        assert_eq!(task.nx(), 16);
        assert_eq!(task.na(), 4);
        assert_eq!(task.support().len(), 112);
        // x = y requires a = b
        assert!(task.relation(5, 5, 3, 3));
        assert!(!task.relation(5, 5, 3, 2));
        // Δ = 2 requires a ≠ b
        assert!(task.relation(0b0000, 0b0011, 1, 2));
        assert!(!task.relation(0b0000, 0b0011, 1, 1));
        // Δ = 1 is off-promise: everything allowed
        assert!(task.relation(0b0000, 0b0001, 1, 1));
        assert!(!task.promise_holds(0b0000, 0b0001));
    }

    #[test]
    fn cvdnt_distributions() {
        let uniform = TaskSpec::cvdnt(false).unwrap();
        assert_eq!(uniform.support().len(), 16);
        assert!(uniform.is_equiweighted());
        let nonzero = TaskSpec::cvdnt(true).unwrap();
        assert_eq!(nonzero.support().len(), 9);
        assert!(nonzero.is_equiweighted());
        assert!((nonzero.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // parity relation spot checks: x = 11, y = 11 → 1·1 + 1·1 = 0 (mod 2)
        assert!(uniform.relation(3, 3, 0, 0));
        // x = 01, y = 01 → 0·0 + 1·1 = 1
        assert!(uniform.relation(1, 1, 1, 1));
        assert!(!uniform.relation(1, 1, 0, 1));
    }

    #[test]
    fn json_round_trip_of_a_small_task() {
        let text = r#"{
            "name": "xor-match",
            "x": ["0", "1"],
            "y": ["0", "1"],
            "a": ["0", "1"],
            "b": ["0", "1"],
            "allowed": [
                ["0", "0", "0", "0"], ["0", "1", "1", "1"],
                ["1", "0", "1", "1"], ["1", "1", "0", "0"]
            ],
            "distribution": "uniform-all"
        }"#;
        let task = TaskSpec::from_json(text).unwrap();
        assert_eq!(task.name, "xor-match");
        assert!(task.relation(0, 1, 1, 1));
        assert!(!task.relation(0, 1, 0, 0));
        assert_eq!(task.support().len(), 4);
    }

    #[test]
    fn json_rejects_unknown_labels() {
        let text = r#"{
            "x": ["0"], "y": ["0"], "a": ["0"], "b": ["0"],
            "allowed": [["0", "0", "0", "oops"]]
        }"#;
        assert!(matches!(TaskSpec::from_json(text), Err(Error::Argument(_))));
    }

    #[test]
    fn explicit_weights_parse_and_normalize() {
        let text = r#"{
            "x": ["0", "1"], "y": ["0", "1"], "a": ["0"], "b": ["0"],
            "allowed": [["0", "0", "0", "0"]],
            "distribution": [
                {"x": "0", "y": "0", "w": 3.0},
                {"x": "1", "y": "1", "w": 1.0}
            ]
        }"#;
        let task = TaskSpec::from_json(text).unwrap();
        let weights = task.weights();
        assert!((weights[0] - 0.75).abs() < 1e-12);
        assert!((weights[3] - 0.25).abs() < 1e-12);
        assert!(!task.is_equiweighted());
        assert_eq!(task.support(), vec![(0, 0), (1, 1)]);
    }
}
