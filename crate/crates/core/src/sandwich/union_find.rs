/// Disjoint sets over node indices with union by rank and path compression.
/// Each root carries a representative node chosen by the caller.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
    rep: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            rep: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// Representative of the set containing `x`.
    pub fn representative(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.rep[r as usize]
    }

    /// Merges the sets of roots `a` and `b`; `rep` becomes the representative.
    pub fn union_roots(&mut self, a: u32, b: u32, rep: u32) {
        let (a, b) = if self.rank[a as usize] < self.rank[b as usize] { (b, a) } else { (a, b) };
        self.parent[b as usize] = a;
        if self.rank[a as usize] == self.rank[b as usize] {
            self.rank[a as usize] += 1;
        }
        self.rep[a as usize] = rep;
    }
}

/// What happened to one arc of an elder-rule sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcOutcome {
    /// The arc merged two classes; `died` is the younger representative.
    Merge { died: u32, survivor: u32 },
    /// Both ends were already in the same class.
    Cycle,
}

/// Processes `arcs` in the given order, merging classes by the elder rule.
/// `older(a, b)` is true when node `a` was born before node `b`.
pub fn elder_sweep(
    node_count: usize,
    arcs: &[(u32, u32)],
    older: impl Fn(u32, u32) -> bool,
) -> Vec<ArcOutcome> {
    let mut uf = UnionFind::new(node_count);
    arcs.iter()
        .map(|&(a, b)| {
            let (ra, rb) = (uf.find(a), uf.find(b));
            if ra == rb {
                return ArcOutcome::Cycle;
            }
            let (ea, eb) = (uf.rep[ra as usize], uf.rep[rb as usize]);
            let (survivor, died) = if older(ea, eb) { (ea, eb) } else { (eb, ea) };
            uf.union_roots(ra, rb, survivor);
            ArcOutcome::Merge { died, survivor }
        })
        .collect()
}
