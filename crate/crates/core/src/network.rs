//! Directed binary social networks.
//!
//! Entry `(i, j)` of the adjacency is 1 when node `i` nominates node `j`.
//! Undirected graphs are stored as symmetric directed ones.

use std::io::{BufRead, Write};

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Sum over the nodes `i` nominates (row of the adjacency).
    Out,
    /// Sum over the nodes that nominate `i` (column of the adjacency).
    In,
}

/// Immutable directed network with sorted neighbour lists in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialNetwork {
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    edges: usize,
}

/// Edges grouped by reciprocity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReciprocityPartition {
    /// Mutual pairs, each listed once as `(i, j)` with `i < j`.
    pub mutual: Vec<(usize, usize)>,
    /// Unreciprocated edges `(i, j)`: `i` names `j`, `j` does not name `i`.
    pub named_only: Vec<(usize, usize)>,
    /// The same unreciprocated ties seen from the named side: `(j, i)` means
    /// `j` is named by `i` without naming back.
    pub namer_only: Vec<(usize, usize)>,
}

impl SocialNetwork {
    /// Network on `n` nodes with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::argument("a network needs at least one node"));
        }
        Ok(Self { out: vec![Vec::new(); n], inn: vec![Vec::new(); n], edges: 0 })
    }

    /// Builds a network from ordered pairs. Duplicate pairs collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut net = Self::empty(n)?;
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::NodeOutOfRange { from: i, to: j, n });
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            net.out[i].push(j);
        }
        for list in &mut net.out {
            list.sort_unstable();
            list.dedup();
        }
        for (i, list) in net.out.iter().enumerate() {
            for &j in list {
                net.inn[j].push(i);
            }
        }
        net.edges = net.out.iter().map(Vec::len).sum();
        Ok(net)
    }

    /// Symmetric network from unordered pairs: each `{i, j}` becomes both `(i, j)` and `(j, i)`.
    pub fn from_undirected<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, pairs.into_iter().flat_map(|(i, j)| [(i, j), (j, i)]))
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    /// Number of ordered pairs with `A[i][j] = 1`.
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.out.get(i).is_some_and(|l| l.binary_search(&j).is_ok())
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn in_neighbors(&self, i: usize) -> &[usize] {
        &self.inn[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out[i].len()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.inn[i].len()
    }

    /// Average out-degree, i.e. edges per node. For a symmetric network this is
    /// the ordinary undirected mean degree.
    pub fn mean_degree(&self) -> f64 {
        self.edges as f64 / self.node_count() as f64
    }

    /// All edges in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(i, l)| l.iter().map(move |&j| (i, j)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.out.iter().zip(&self.inn).all(|(o, i)| o == i)
    }

    /// `Σ_j A[i][j] y[j]` (out) or `Σ_j A[j][i] y[j]` (in) for every node `i`.
    pub fn exposure<T: Real>(&self, direction: Direction, y: &[T]) -> Result<Vec<T>> {
        Error::check_len(self.node_count(), y.len())?;
        let lists = match direction {
            Direction::Out => &self.out,
            Direction::In => &self.inn,
        };
        Ok(lists.iter().map(|l| l.iter().map(|&j| y[j]).sum()).collect())
    }

    pub fn reciprocity_partition(&self) -> ReciprocityPartition {
        let mut part = ReciprocityPartition::default();
        for (i, j) in self.edges() {
            if self.has_edge(j, i) {
                if i < j {
                    part.mutual.push((i, j));
                }
            } else {
                part.named_only.push((i, j));
                part.namer_only.push((j, i));
            }
        }
        part.namer_only.sort_unstable();
        part
    }

    /// Writes the edge list: a `# nodes: n` header followed by one `i j` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# nodes: {}", self.node_count())?;
        for (i, j) in self.edges() {
            writeln!(w, "{i} {j}")?;
        }
        Ok(())
    }

    /// Reads the format written by [`write_edge_list`](Self::write_edge_list).
    /// Without a `# nodes:` header the node count is one past the largest index.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (k, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            let parse_err = |message: String| Error::Parse { line: k + 1, message };
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("nodes:") {
                    let n = v.trim().parse::<usize>().map_err(|e| parse_err(e.to_string()))?;
                    declared = Some(n);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<usize> {
                parts
                    .next()
                    .ok_or_else(|| parse_err("expected two node indices".into()))?
                    .parse::<usize>()
                    .map_err(|e| parse_err(e.to_string()))
            };
            let (i, j) = (next()?, next()?);
            if parts.next().is_some() {
                return Err(parse_err("trailing fields".into()));
            }
            edges.push((i, j));
        }
        let n = declared
            .unwrap_or_else(|| edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0));
        Self::from_edges(n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_network_has_zero_exposure() {
        let net = SocialNetwork::from_edges(3, []).unwrap();
        assert_eq!(net.edge_count(), 0);
        let y = [1.0, 2.0, 3.0];
        assert_eq!(net.exposure(Direction::Out, &y).unwrap(), vec![0.0; 3]);
        assert_eq!(net.exposure(Direction::In, &y).unwrap(), vec![0.0; 3]);
        assert_eq!(net.reciprocity_partition(), ReciprocityPartition::default());
    }

    #[test]
    fn single_directed_edge() {
        let net = SocialNetwork::from_edges(2, [(0, 1)]).unwrap();
        assert!(net.has_edge(0, 1));
        assert!(!net.has_edge(1, 0));
        let part = net.reciprocity_partition();
        assert!(part.mutual.is_empty());
        assert_eq!(part.named_only, vec![(0, 1)]);

        let y = [5.0, 7.0];
        assert_eq!(net.exposure(Direction::Out, &y).unwrap(), vec![7.0, 0.0]);
        assert_eq!(net.exposure(Direction::In, &y).unwrap(), vec![0.0, 5.0]);
    }

    #[test]
    fn out_exposure_sums_nominees() {
        let net = SocialNetwork::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let e = net.exposure(Direction::Out, &[0.0, 1.0, 1.0]).unwrap();
        assert_eq!(e[0], 2.0);
    }

    #[test]
    fn reciprocity_classes() {
        let net = SocialNetwork::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        let part = net.reciprocity_partition();
        assert_eq!(part.mutual, vec![(0, 1)]);
        assert_eq!(part.named_only, vec![(1, 2)]);
        assert_eq!(part.namer_only, vec![(2, 1)]);

        let full = SocialNetwork::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let part = full.reciprocity_partition();
        assert_eq!(part.mutual, vec![(0, 1)]);
        assert!(part.named_only.is_empty() && part.namer_only.is_empty());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(SocialNetwork::from_edges(2, [(0, 2)]), Err(Error::NodeOutOfRange { .. })));
        assert!(matches!(SocialNetwork::from_edges(2, [(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(SocialNetwork::from_edges(0, []).is_err());
        let net = SocialNetwork::from_edges(2, [(0, 1)]).unwrap();
        assert!(matches!(
            net.exposure(Direction::Out, &[1.0]),
            Err(Error::Dimension { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn symmetry_predicate() {
        assert!(SocialNetwork::from_undirected(3, [(0, 1), (2, 1)]).unwrap().is_symmetric());
        assert!(!SocialNetwork::from_edges(2, [(0, 1)]).unwrap().is_symmetric());
    }

    #[test]
    fn edge_list_round_trip() {
        let net = SocialNetwork::from_edges(5, [(0, 1), (3, 2), (4, 0)]).unwrap();
        let mut buf = Vec::new();
        net.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "# nodes: 5\n0 1\n3 2\n4 0\n");
        assert_eq!(SocialNetwork::read_edge_list(&buf[..]).unwrap(), net);

        let inferred = SocialNetwork::read_edge_list("0 1\n\n2 0\n".as_bytes()).unwrap();
        assert_eq!(inferred.node_count(), 3);
        assert!(matches!(
            SocialNetwork::read_edge_list("0 x\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    fn arb_network() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..50).prop_flat_map(|n| {
            // Self-loops are redirected to the next node; n = 1 yields no edges.
            let pair = (0..n, 0..n).prop_map(move |(i, j)| if i == j { (i, (j + 1) % n) } else { (i, j) });
            let max = if n == 1 { 0 } else { 3 * n };
            (Just(n), proptest::collection::vec(pair, 0..=max))
        })
    }

    proptest! {
        #[test]
        fn exposure_matches_double_loop((n, edges) in arb_network(), seed in any::<u64>()) {
            let net = SocialNetwork::from_edges(n, edges).unwrap();
            let y: Vec<f64> = (0..n).map(|k| ((seed.wrapping_add(k as u64 * 7919)) % 1000) as f64 / 100.0 - 5.0).collect();
            let out = net.exposure(Direction::Out, &y).unwrap();
            let inn = net.exposure(Direction::In, &y).unwrap();
            for i in 0..n {
                let mut row = 0.0;
                let mut col = 0.0;
                for j in 0..n {
                    if net.has_edge(i, j) { row += y[j]; }
                    if net.has_edge(j, i) { col += y[j]; }
                }
                prop_assert!((out[i] - row).abs() < 1e-9);
                prop_assert!((inn[i] - col).abs() < 1e-9);
            }
        }

        #[test]
        fn partition_is_disjoint_and_covers((n, edges) in arb_network()) {
            let net = SocialNetwork::from_edges(n, edges).unwrap();
            let part = net.reciprocity_partition();
            let mut covered: Vec<(usize, usize)> = part.mutual.iter().flat_map(|&(i, j)| [(i, j), (j, i)]).collect();
            covered.extend(&part.named_only);
            covered.sort_unstable();
            let before = covered.len();
            covered.dedup();
            prop_assert_eq!(before, covered.len());
            prop_assert_eq!(covered, net.edges().collect::<Vec<_>>());
            let mut mirrored: Vec<_> = part.named_only.iter().map(|&(i, j)| (j, i)).collect();
            mirrored.sort_unstable();
            prop_assert_eq!(mirrored, part.namer_only);
        }

        #[test]
        fn duplicated_edges_collapse((n, edges) in arb_network()) {
            let once = SocialNetwork::from_edges(n, edges.clone()).unwrap();
            let twice = SocialNetwork::from_edges(n, edges.iter().chain(&edges).copied()).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
