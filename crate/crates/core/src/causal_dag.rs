//! Causal DAGs with latent nodes: d-separation and back-door path queries.
//!
//! d-separation uses the reachability ("Bayes-ball") traversal. Back-door
//! paths are enumerated explicitly since callers want to see them.
//!
//! Text format, one statement per line (`#` starts a comment):
//!
//! ```text
//! Xi -> Aij
//! Xj -> Aij
//! latent: Xi Xj
//! nodes: Zi          # optional, declares isolated nodes
//! ```

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalDag {
    names: Vec<String>,
    latent: Vec<bool>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

/// A path through the skeleton. `forward[k]` is true when the `k`-th edge
/// points from `nodes[k]` to `nodes[k + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagPath {
    pub nodes: Vec<usize>,
    pub forward: Vec<bool>,
}

impl DagPath {
    pub fn render(&self, dag: &CausalDag) -> String {
        let mut s = dag.name(self.nodes[0]).to_string();
        for (k, &fwd) in self.forward.iter().enumerate() {
            s.push_str(if fwd { " -> " } else { " <- " });
            s.push_str(dag.name(self.nodes[k + 1]));
        }
        s
    }
}

#[derive(Debug, Default)]
pub struct DagBuilder {
    nodes: Vec<(String, bool)>,
    edges: Vec<(String, String)>,
}

impl DagBuilder {
    pub fn observed(mut self, name: &str) -> Self {
        self.nodes.push((name.to_string(), false));
        self
    }

    pub fn latent(mut self, name: &str) -> Self {
        self.nodes.push((name.to_string(), true));
        self
    }

    pub fn edge(mut self, from: &str, to: &str) -> Self {
        self.edges.push((from.to_string(), to.to_string()));
        self
    }

    pub fn edges(mut self, pairs: &[(&str, &str)]) -> Self {
        self.edges.extend(pairs.iter().map(|&(a, b)| (a.to_string(), b.to_string())));
        self
    }

    pub fn build(self) -> Result<CausalDag> {
        let mut index = HashMap::new();
        let mut names = Vec::new();
        let mut latent = Vec::new();
        for (name, is_latent) in self.nodes {
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::argument(format!("duplicate node `{name}`")));
            }
            names.push(name);
            latent.push(is_latent);
        }
        let n = names.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for (a, b) in &self.edges {
            let ia = *index.get(a).ok_or_else(|| Error::UnknownNode(a.clone()))?;
            let ib = *index.get(b).ok_or_else(|| Error::UnknownNode(b.clone()))?;
            if ia == ib {
                return Err(Error::Cyclic(a.clone()));
            }
            if !children[ia].contains(&ib) {
                children[ia].push(ib);
                parents[ib].push(ia);
            }
        }
        let dag = CausalDag { names, latent, parents, children, index };
        dag.check_acyclic()?;
        Ok(dag)
    }
}

impl CausalDag {
    pub fn builder() -> DagBuilder {
        DagBuilder::default()
    }

    /// Kahn's algorithm; reports a node left on a cycle.
    fn check_acyclic(&self) -> Result<()> {
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        match (0..self.len()).find(|&v| indeg[v] > 0) {
            Some(v) if seen < self.len() => Err(Error::Cyclic(self.names[v].clone())),
            _ => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn node(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_latent(&self, v: usize) -> bool {
        self.latent[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.children[from].contains(&to)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.children.iter().enumerate().flat_map(|(a, cs)| cs.iter().map(move |&b| (a, b)))
    }

    pub fn observed_nodes(&self) -> impl Iterator<Item = &str> {
        self.names.iter().zip(&self.latent).filter(|(_, &l)| !l).map(|(n, _)| n.as_str())
    }

    pub fn latent_nodes(&self) -> impl Iterator<Item = &str> {
        self.names.iter().zip(&self.latent).filter(|(_, &l)| l).map(|(n, _)| n.as_str())
    }

    /// Observed nodes other than those listed, the usual "condition on
    /// everything we can see" adjustment set.
    pub fn observed_except(&self, exclude: &[&str]) -> Vec<String> {
        self.observed_nodes().filter(|n| !exclude.contains(n)).map(String::from).collect()
    }

    /// Copy without the edge `from -> to`.
    pub fn without_edge(&self, from: &str, to: &str) -> Result<Self> {
        let (a, b) = (self.node(from)?, self.node(to)?);
        if !self.has_edge(a, b) {
            return Err(Error::argument(format!("no edge {from} -> {to}")));
        }
        let mut out = self.clone();
        out.children[a].retain(|&c| c != b);
        out.parents[b].retain(|&p| p != a);
        Ok(out)
    }

    fn resolve(&self, names: &[impl AsRef<str>]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.node(n.as_ref())).collect()
    }

    fn query_nodes(&self, a: &str, b: &str, conditioning: &[impl AsRef<str>]) -> Result<(usize, usize, Vec<bool>)> {
        let (ia, ib) = (self.node(a)?, self.node(b)?);
        if ia == ib {
            return Err(Error::argument("query endpoints must differ"));
        }
        let mut given = vec![false; self.len()];
        for v in self.resolve(conditioning)? {
            if v == ia || v == ib {
                return Err(Error::argument(format!("`{}` is both an endpoint and conditioned on", self.names[v])));
            }
            given[v] = true;
        }
        Ok((ia, ib, given))
    }

    /// Marks every node that is in `given` or has a descendant in it.
    fn ancestors_of(&self, given: &[bool]) -> Vec<bool> {
        let mut anc = given.to_vec();
        let mut stack: Vec<usize> = (0..self.len()).filter(|&v| given[v]).collect();
        while let Some(v) = stack.pop() {
            for &p in &self.parents[v] {
                if !anc[p] {
                    anc[p] = true;
                    stack.push(p);
                }
            }
        }
        anc
    }

    /// Whether `a` and `b` are d-separated given `conditioning`.
    pub fn d_separated(&self, a: &str, b: &str, conditioning: &[impl AsRef<str>]) -> Result<bool> {
        let (ia, ib, given) = self.query_nodes(a, b, conditioning)?;
        Ok(!self.reachable(ia, &given)[ib])
    }

    /// [`d_separated`](Self::d_separated) restricted to admissible (observed)
    /// conditioning sets.
    pub fn d_separated_observed(&self, a: &str, b: &str, conditioning: &[impl AsRef<str>]) -> Result<bool> {
        self.check_admissible(conditioning)?;
        self.d_separated(a, b, conditioning)
    }

    fn check_admissible(&self, conditioning: &[impl AsRef<str>]) -> Result<()> {
        for v in self.resolve(conditioning)? {
            if self.latent[v] {
                return Err(Error::LatentConditioning(self.names[v].clone()));
            }
        }
        Ok(())
    }

    /// Nodes connected to `source` by an active trail given `given`.
    ///
    /// Traversal states are `(node, arrived_from_child)`. Passing upward
    /// through an unconditioned node continues to parents and children;
    /// passing downward continues to children when unconditioned and bounces
    /// back to parents when the node is conditioned on or has a conditioned
    /// descendant (an activated collider).
    fn reachable(&self, source: usize, given: &[bool]) -> Vec<bool> {
        let anc = self.ancestors_of(given);
        let n = self.len();
        let mut visited = vec![[false; 2]; n];
        let mut reach = vec![false; n];
        let mut queue = VecDeque::from([(source, true)]);
        while let Some((v, up)) = queue.pop_front() {
            if std::mem::replace(&mut visited[v][usize::from(up)], true) {
                continue;
            }
            if !given[v] {
                reach[v] = true;
            }
            if up {
                if !given[v] {
                    queue.extend(self.parents[v].iter().map(|&p| (p, true)));
                    queue.extend(self.children[v].iter().map(|&c| (c, false)));
                }
            } else {
                if !given[v] {
                    queue.extend(self.children[v].iter().map(|&c| (c, false)));
                }
                if anc[v] {
                    queue.extend(self.parents[v].iter().map(|&p| (p, true)));
                }
            }
        }
        reach[source] = false;
        reach
    }

    /// Every unblocked path from `treatment` to `outcome` whose first edge
    /// points into `treatment`. Empty means the conditioning set satisfies
    /// the back-door criterion for the direct effect.
    pub fn open_backdoor_paths(
        &self,
        treatment: &str,
        outcome: &str,
        conditioning: &[impl AsRef<str>],
    ) -> Result<Vec<DagPath>> {
        let (t, o, given) = self.query_nodes(treatment, outcome, conditioning)?;
        let anc = self.ancestors_of(&given);
        let mut found = Vec::new();
        let mut on_path = vec![false; self.len()];
        on_path[t] = true;
        for &p in &self.parents[t] {
            let mut path = DagPath { nodes: vec![t, p], forward: vec![false] };
            on_path[p] = true;
            self.extend_open(&mut path, o, &given, &anc, &mut on_path, &mut found);
            on_path[p] = false;
        }
        Ok(found)
    }

    /// Like [`open_backdoor_paths`](Self::open_backdoor_paths) but rejects latent conditioning nodes.
    pub fn open_backdoor_paths_observed(
        &self,
        treatment: &str,
        outcome: &str,
        conditioning: &[impl AsRef<str>],
    ) -> Result<Vec<DagPath>> {
        self.check_admissible(conditioning)?;
        self.open_backdoor_paths(treatment, outcome, conditioning)
    }

    fn extend_open(
        &self,
        path: &mut DagPath,
        target: usize,
        given: &[bool],
        anc: &[bool],
        on_path: &mut [bool],
        found: &mut Vec<DagPath>,
    ) {
        let cur = *path.nodes.last().expect("path is never empty");
        if cur == target {
            found.push(path.clone());
            return;
        }
        let arrived_forward = *path.forward.last().expect("path has an edge");
        let steps = self.children[cur].iter().map(|&c| (c, true)).chain(self.parents[cur].iter().map(|&p| (p, false)));
        for (next, forward) in steps {
            if on_path[next] {
                continue;
            }
            // cur is a collider iff both edges point into it.
            let collider = arrived_forward && !forward;
            let open = if collider { anc[cur] } else { !given[cur] };
            if !open {
                continue;
            }
            on_path[next] = true;
            path.nodes.push(next);
            path.forward.push(forward);
            self.extend_open(path, target, given, anc, on_path, found);
            path.nodes.pop();
            path.forward.pop();
            on_path[next] = false;
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let isolated: Vec<&str> = (0..self.len())
            .filter(|&v| self.parents[v].is_empty() && self.children[v].is_empty())
            .map(|v| self.name(v))
            .collect();
        if !isolated.is_empty() {
            s.push_str(&format!("nodes: {}\n", isolated.join(" ")));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("{} -> {}\n", self.name(a), self.name(b)));
        }
        let latent: Vec<&str> = self.latent_nodes().collect();
        if !latent.is_empty() {
            s.push_str(&format!("latent: {}\n", latent.join(" ")));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut order: Vec<String> = Vec::new();
        let mut seen = HashMap::new();
        let mut latent = Vec::new();
        let mut edges = Vec::new();
        let mut note = |name: &str, order: &mut Vec<String>| {
            if seen.insert(name.to_string(), ()).is_none() {
                order.push(name.to_string());
            }
        };
        let list = |rest: &str| -> Vec<String> {
            rest.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(String::from).collect()
        };
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("latent:") {
                for name in list(rest) {
                    note(&name, &mut order);
                    latent.push(name);
                }
            } else if let Some(rest) = line.strip_prefix("nodes:") {
                for name in list(rest) {
                    note(&name, &mut order);
                }
            } else if let Some((a, b)) = line.split_once("->") {
                let (a, b) = (a.trim(), b.trim());
                if a.is_empty() || b.is_empty() || a.contains(char::is_whitespace) || b.contains(char::is_whitespace) {
                    return Err(Error::Parse { line: k + 1, message: format!("malformed edge `{line}`") });
                }
                note(a, &mut order);
                note(b, &mut order);
                edges.push((a.to_string(), b.to_string()));
            } else {
                return Err(Error::Parse { line: k + 1, message: format!("unrecognised statement `{line}`") });
            }
        }
        let mut builder = CausalDag::builder();
        for name in &order {
            builder = if latent.contains(name) { builder.latent(name) } else { builder.observed(name) };
        }
        for (a, b) in edges {
            builder = builder.edge(&a, &b);
        }
        builder.build()
    }

    pub fn template(which: Template) -> Self {
        which.build()
    }
}

/// Two-individual causal graphs for the settings studied here. Node names:
/// `Xi`/`Xj` traits, `Zi`/`Zj` observed covariates, `Aij` the tie (i names
/// j), and `Yi_t2`, `Yi_t1`, `Yi_t` outcomes at t−2, t−1, t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    /// Latent homophily with a contagion edge `Yj_t1 -> Yi_t`.
    Fig1,
    /// As `Fig1`, but the latent trait reaches outcomes only through observed `Z`.
    Fig3a,
    /// As `Fig1`, but the latent trait reaches the tie only through observed `Z`.
    Fig3b,
    /// Latent trend model: three outcome times, no edges between individuals' outcomes.
    Fig4,
    /// Voter model: observed traits drive ties only; outcomes copied along the tie.
    Fig5,
}

impl Template {
    pub const ALL: [Template; 5] = [Template::Fig1, Template::Fig3a, Template::Fig3b, Template::Fig4, Template::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Template::Fig1 => "fig1",
            Template::Fig3a => "fig3a",
            Template::Fig3b => "fig3b",
            Template::Fig4 => "fig4",
            Template::Fig5 => "fig5",
        }
    }

    fn build(self) -> CausalDag {
        let two_step = ["Yi_t1", "Yi_t", "Yj_t1", "Yj_t"];
        let persistence = [("Yi_t1", "Yi_t"), ("Yj_t1", "Yj_t")];
        let b = CausalDag::builder();
        let b = match self {
            Template::Fig1 | Template::Fig3a | Template::Fig3b => {
                let b = b.latent("Xi").latent("Xj").observed("Zi").observed("Zj").observed("Aij");
                let b = two_step.iter().fold(b, |b, n| b.observed(n));
                let b = b
                    .edges(&[("Xi", "Zi"), ("Xj", "Zj")])
                    .edges(&[("Zi", "Yi_t1"), ("Zi", "Yi_t"), ("Zj", "Yj_t1"), ("Zj", "Yj_t")])
                    .edges(&persistence)
                    .edges(&[("Yj_t1", "Yi_t"), ("Aij", "Yi_t")]);
                let b = if self == Template::Fig3a {
                    b
                } else {
                    b.edges(&[("Xi", "Yi_t1"), ("Xi", "Yi_t"), ("Xj", "Yj_t1"), ("Xj", "Yj_t")])
                };
                if self == Template::Fig3b {
                    b.edges(&[("Zi", "Aij"), ("Zj", "Aij")])
                } else {
                    b.edges(&[("Xi", "Aij"), ("Xj", "Aij")])
                }
            }
            Template::Fig4 => {
                let b = b.latent("Xi").latent("Xj").observed("Aij");
                let ys = ["Yi_t2", "Yi_t1", "Yi_t", "Yj_t2", "Yj_t1", "Yj_t"];
                let b = ys.iter().fold(b, |b, n| b.observed(n));
                b.edges(&[("Xi", "Aij"), ("Xj", "Aij")])
                    .edges(&[("Xi", "Yi_t2"), ("Xi", "Yi_t1"), ("Xi", "Yi_t")])
                    .edges(&[("Xj", "Yj_t2"), ("Xj", "Yj_t1"), ("Xj", "Yj_t")])
                    .edges(&[("Yi_t2", "Yi_t1"), ("Yj_t2", "Yj_t1")])
                    .edges(&persistence)
            }
            Template::Fig5 => {
                let b = b.observed("Xi").observed("Xj").observed("Aij");
                let b = two_step.iter().fold(b, |b, n| b.observed(n));
                b.edges(&[("Xi", "Aij"), ("Xj", "Aij")])
                    .edges(&persistence)
                    .edges(&[("Yj_t1", "Yi_t"), ("Yi_t1", "Yj_t"), ("Aij", "Yi_t"), ("Aij", "Yj_t")])
            }
        };
        b.build().expect("templates are acyclic with known nodes")
    }
}

impl FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Template::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTemplate(s.to_string()))
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::substream;
    use rand::Rng;

    const NONE: [&str; 0] = [];

    /// Oracle: enumerate every simple path in the skeleton and test each one
    /// against the blocking rules.
    fn brute_force_separated(dag: &CausalDag, a: usize, b: usize, given: &[bool]) -> bool {
        fn has_given_descendant(dag: &CausalDag, v: usize, given: &[bool]) -> bool {
            given[v] || dag.children(v).iter().any(|&c| has_given_descendant(dag, c, given))
        }
        fn walk(dag: &CausalDag, path: &mut Vec<(usize, bool)>, b: usize, given: &[bool], used: &mut Vec<bool>) -> bool {
            let (cur, _) = *path.last().unwrap();
            if cur == b {
                // Check every interior node of the finished path.
                return (1..path.len() - 1).all(|k| {
                    let v = path[k].0;
                    let into_v = path[k].1; // edge k-1 -> k points forward (into v)
                    let out_of_v = !path[k + 1].1; // edge k -> k+1 points back into v
                    if into_v && out_of_v {
                        has_given_descendant(dag, v, given)
                    } else {
                        !given[v]
                    }
                });
            }
            let nexts: Vec<(usize, bool)> = dag
                .children(cur)
                .iter()
                .map(|&c| (c, true))
                .chain(dag.parents(cur).iter().map(|&p| (p, false)))
                .collect();
            for (nx, fwd) in nexts {
                if used[nx] {
                    continue;
                }
                used[nx] = true;
                path.push((nx, fwd));
                let open = walk(dag, path, b, given, used);
                path.pop();
                used[nx] = false;
                if open {
                    return true;
                }
            }
            false
        }
        let mut used = vec![false; dag.len()];
        used[a] = true;
        !walk(dag, &mut vec![(a, false)], b, given, &mut used)
    }

    fn random_dag(rng: &mut impl Rng) -> CausalDag {
        let n = rng.random_range(2..=12);
        let p = rng.random_range(0.1..0.5);
        let names: Vec<String> = (0..n).map(|k| format!("v{k}")).collect();
        let mut b = CausalDag::builder();
        for name in &names {
            b = b.observed(name);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random::<f64>() < p {
                    b = b.edge(&names[i], &names[j]);
                }
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn chain_and_collider() {
        let chain = CausalDag::builder().observed("a").observed("m").observed("b").edge("a", "m").edge("m", "b").build().unwrap();
        assert!(chain.d_separated("a", "b", &["m"]).unwrap());
        assert!(!chain.d_separated("a", "b", &NONE).unwrap());

        let coll = CausalDag::builder().observed("a").observed("m").observed("b").edge("a", "m").edge("b", "m").build().unwrap();
        assert!(coll.d_separated("a", "b", &NONE).unwrap());
        assert!(!coll.d_separated("a", "b", &["m"]).unwrap());
    }

    #[test]
    fn collider_descendant_activates() {
        let dag = CausalDag::builder()
            .observed("a")
            .observed("m")
            .observed("b")
            .observed("d")
            .edges(&[("a", "m"), ("b", "m"), ("m", "d")])
            .build()
            .unwrap();
        assert!(!dag.d_separated("a", "b", &["d"]).unwrap());
    }

    #[test]
    fn agrees_with_path_enumeration() {
        let mut rng = substream(42, 0);
        for _ in 0..300 {
            let dag = random_dag(&mut rng);
            let n = dag.len();
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            let cond: Vec<String> =
                (0..n).filter(|&v| v != a && v != b && rng.random_bool(0.3)).map(|v| dag.name(v).to_string()).collect();
            let mut given = vec![false; n];
            for c in &cond {
                given[dag.node(c).unwrap()] = true;
            }
            let fast = dag.d_separated(dag.name(a), dag.name(b), &cond).unwrap();
            assert_eq!(fast, brute_force_separated(&dag, a, b, &given));
            assert_eq!(fast, dag.d_separated(dag.name(b), dag.name(a), &cond).unwrap());
        }
    }

    #[test]
    fn query_errors() {
        let dag = Template::Fig1.build();
        assert!(matches!(dag.d_separated("Xi", "nope", &NONE), Err(Error::UnknownNode(_))));
        assert!(dag.d_separated("Xi", "Xi", &NONE).is_err());
        assert!(dag.d_separated("Xi", "Aij", &["Aij"]).is_err());
        assert!(matches!(dag.d_separated_observed("Yj_t1", "Yi_t", &["Xi"]), Err(Error::LatentConditioning(_))));
        let cyclic = CausalDag::builder().observed("a").observed("b").edge("a", "b").edge("b", "a").build();
        assert!(matches!(cyclic, Err(Error::Cyclic(_))));
        assert!(CausalDag::builder().observed("a").observed("a").build().is_err());
    }

    #[test]
    fn fig1_structure_and_confounding() {
        let dag = Template::Fig1.build();
        let latent: Vec<&str> = dag.latent_nodes().collect();
        assert_eq!(latent, ["Xi", "Xj"]);
        for (a, b) in [("Xi", "Aij"), ("Xj", "Aij"), ("Xi", "Yi_t1"), ("Xi", "Yi_t"), ("Yi_t1", "Yi_t"), ("Yj_t1", "Yi_t")] {
            assert!(dag.has_edge(dag.node(a).unwrap(), dag.node(b).unwrap()), "{a} -> {b}");
        }
        let obs = dag.observed_except(&["Yj_t1", "Yi_t"]);
        let without = dag.without_edge("Yj_t1", "Yi_t").unwrap();
        assert!(!without.d_separated_observed("Yj_t1", "Yi_t", &obs).unwrap());

        let paths: Vec<String> =
            dag.open_backdoor_paths("Yj_t1", "Yi_t", &obs).unwrap().iter().map(|p| p.render(&dag)).collect();
        assert!(paths.contains(&"Yj_t1 <- Xj -> Aij <- Xi -> Yi_t".to_string()), "{paths:?}");
    }

    #[test]
    fn observable_control_removes_backdoors() {
        for t in [Template::Fig3a, Template::Fig3b] {
            let dag = t.build();
            let obs = dag.observed_except(&["Yj_t1", "Yi_t"]);
            assert!(dag.open_backdoor_paths_observed("Yj_t1", "Yi_t", &obs).unwrap().is_empty(), "{t}");
        }
    }

    #[test]
    fn no_parent_means_no_backdoor() {
        let dag = CausalDag::builder().observed("t").observed("o").observed("c").edges(&[("t", "o"), ("c", "o")]).build().unwrap();
        assert!(dag.open_backdoor_paths("t", "o", &NONE).unwrap().is_empty());
        assert!(dag.open_backdoor_paths("t", "o", &["c"]).unwrap().is_empty());
    }

    #[test]
    fn backdoor_paths_respect_blocking() {
        // t <- u -> o and t <- c1 -> m <- c2 -> o (collider m).
        let dag = CausalDag::builder()
            .observed("t")
            .observed("o")
            .observed("u")
            .observed("c1")
            .observed("c2")
            .observed("m")
            .edges(&[("t", "o"), ("u", "t"), ("u", "o"), ("c1", "t"), ("c1", "m"), ("c2", "m"), ("c2", "o")])
            .build()
            .unwrap();
        let render = |cond: &[&str]| -> Vec<String> {
            dag.open_backdoor_paths("t", "o", cond).unwrap().iter().map(|p| p.render(&dag)).collect()
        };
        assert_eq!(render(&[]), ["t <- u -> o"]);
        assert!(render(&["u"]).is_empty());
        let mut opened = render(&["u", "m"]);
        opened.sort();
        assert_eq!(opened, ["t <- c1 -> m <- c2 -> o"]);
    }

    #[test]
    fn templates_without_contagion_edges() {
        for t in [Template::Fig4, Template::Fig5] {
            let dag = t.build();
            assert!(!dag.has_edge(dag.node("Yj_t1").unwrap(), dag.node("Yi_t").unwrap()) || t == Template::Fig5);
        }
        let fig4 = Template::Fig4.build();
        for (a, b) in fig4.edges() {
            let (na, nb) = (fig4.name(a), fig4.name(b));
            if na.starts_with('Y') && nb.starts_with('Y') {
                assert_eq!(na.as_bytes()[1], nb.as_bytes()[1], "{na} -> {nb}");
            }
        }
        let fig5 = Template::Fig5.build();
        assert_eq!(fig5.latent_nodes().count(), 0);
        for (a, b) in fig5.edges() {
            assert!(!(fig5.name(a).starts_with('X') && fig5.name(b).starts_with('Y')));
        }
    }

    #[test]
    fn text_round_trip() {
        for t in Template::ALL {
            let dag = t.build();
            let back = CausalDag::parse(&dag.to_text()).unwrap();
            let named = |d: &CausalDag| {
                let mut e: Vec<(String, String)> = d.edges().map(|(a, b)| (d.name(a).into(), d.name(b).into())).collect();
                e.sort();
                e
            };
            assert_eq!(named(&back), named(&dag));
            assert_eq!(back.latent_nodes().collect::<Vec<_>>(), dag.latent_nodes().collect::<Vec<_>>());
        }
        let dag = CausalDag::parse("# comment\nnodes: lone\nx -> y\nlatent: x\n").unwrap();
        assert_eq!(dag.len(), 3);
        assert!(dag.is_latent(dag.node("x").unwrap()));
        assert!(matches!(CausalDag::parse("x => y"), Err(Error::Parse { line: 1, .. })));
        assert!("fig9".parse::<Template>().is_err());
        assert_eq!("FIG3A".parse::<Template>().unwrap(), Template::Fig3a);
    }
}
