use crate::graph::DirectedGraph;

/// Undirected projection in CSR form: reciprocal pairs collapse into one
/// edge and every neighbor list is sorted ascending.
#[derive(Debug, Clone)]
pub struct Undirected {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Undirected {
    pub fn from_graph(graph: &DirectedGraph) -> Self {
        let n = graph.node_count();
        let mut degree = vec![0usize; n];
        for (s, d) in graph.edges() {
            degree[s.index()] += 1;
            degree[d.index()] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for (s, d) in graph.edges() {
            targets[fill[s.index()]] = d.0;
            fill[s.index()] += 1;
            targets[fill[d.index()]] = s.0;
            fill[d.index()] += 1;
        }
        // sort and dedup each list, then compact
        let mut compact = Vec::with_capacity(targets.len());
        let mut new_offsets = Vec::with_capacity(n + 1);
        new_offsets.push(0);
        for v in 0..n {
            let list = &mut targets[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            let start = compact.len();
            for &t in list.iter() {
                if compact.len() == start || *compact.last().unwrap() != t {
                    compact.push(t);
                }
            }
            new_offsets.push(compact.len());
        }
        compact.shrink_to_fit();
        Self {
            offsets: new_offsets,
            targets: compact,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Weakly connected components of the directed graph.
    pub fn components(&self) -> Components {
        let n = self.node_count();
        let mut label = vec![u32::MAX; n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for root in 0..n {
            if label[root] != u32::MAX {
                continue;
            }
            let id = sizes.len() as u32;
            label[root] = id;
            stack.push(root as u32);
            let mut size = 0usize;
            while let Some(v) = stack.pop() {
                size += 1;
                for &w in self.neighbors(v as usize) {
                    if label[w as usize] == u32::MAX {
                        label[w as usize] = id;
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        Components { label, sizes }
    }
}

#[derive(Debug, Clone)]
pub struct Components {
    /// Component id per node; ids follow the smallest member's node order.
    pub label: Vec<u32>,
    pub sizes: Vec<usize>,
}

impl Components {
    /// Largest component, lowest id on ties.
    pub fn largest(&self) -> Option<u32> {
        let mut best: Option<(usize, u32)> = None;
        for (id, &size) in self.sizes.iter().enumerate() {
            if best.is_none_or(|(s, _)| size > s) {
                best = Some((size, id as u32));
            }
        }
        best.map(|(_, id)| id)
    }

    pub fn members(&self, id: u32) -> Vec<u32> {
        self.label
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == id)
            .map(|(v, _)| v as u32)
            .collect()
    }

    /// Members of every component, indexed by component id.
    pub fn all_members(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self.sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
        for (v, &l) in self.label.iter().enumerate() {
            out[l as usize].push(v as u32);
        }
        out
    }
}
