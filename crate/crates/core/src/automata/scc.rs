use super::Dfa;

/// Strongly connected components of a DFA's transition graph.
///
/// Components are numbered in topological order of the condensation DAG:
/// every DAG edge goes from a lower to a higher index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Component index of each state.
    pub component: Vec<usize>,
    /// States of each component, ascending.
    pub members: Vec<Vec<usize>>,
    /// Whether the component contains an edge within itself.
    pub nontrivial: Vec<bool>,
    /// One entry per automaton edge between distinct components.
    pub dag_edges: Vec<(usize, usize)>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn same_component(&self, p: usize, q: usize) -> bool {
        self.component[p] == self.component[q]
    }
}

/// Tarjan's algorithm, iterative.
pub fn condense(d: &Dfa) -> Condensation {
    let n = d.num_states();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|q| {
            (0..d.alphabet().len())
                .filter_map(|s| d.step(q, s))
                .collect()
        })
        .collect();

    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut found: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (node, position in its successor list)
        let mut call = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                found.push(comp);
            }
        }
    }

    // Tarjan emits sinks first.
    found.reverse();
    let mut component = vec![0; n];
    for (c, states) in found.iter().enumerate() {
        for &q in states {
            component[q] = c;
        }
    }
    let mut nontrivial = vec![false; found.len()];
    let mut dag_edges = Vec::new();
    for (q, _, r) in d.transitions() {
        let (cq, cr) = (component[q], component[r]);
        if cq == cr {
            nontrivial[cq] = true;
        } else {
            dag_edges.push((cq, cr));
        }
    }
    Condensation {
        component,
        members: found,
        nontrivial,
        dag_edges,
    }
}
