//! Strongly connected components (iterative Tarjan).

use super::{NodeId, TrustNetwork};

/// All strongly connected components, each sorted ascending, in the order
/// Tarjan's algorithm completes them (reverse topological order).
///
/// Iterative so that million-edge graphs do not overflow the call stack.
pub fn strongly_connected_components(net: &TrustNetwork) -> Vec<Vec<NodeId>> {
    const UNVISITED: u32 = u32::MAX;
    let n = net.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<NodeId> = Vec::new();
    // (node, next out-edge index to explore)
    let mut call: Vec<(NodeId, usize)> = Vec::new();
    let mut next_index = 0u32;
    let mut components = Vec::new();

    for root in net.nodes() {
        if index[root as usize] != UNVISITED {
            continue;
        }
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        call.push((root, net.out_edges(root).start));

        while let Some(&mut (v, ref mut cursor)) = call.last_mut() {
            let end = net.out_edges(v).end;
            if *cursor < end {
                let w = net.edge(*cursor).dst;
                *cursor += 1;
                if index[w as usize] == UNVISITED {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, net.out_edges(w).start));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
                continue;
            }

            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent as usize] = low[parent as usize].min(low[v as usize]);
            }
            if low[v as usize] == index[v as usize] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w as usize] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

/// Node set of the largest strongly connected component, ascending. Ties go
/// to the component with the smallest minimum node id.
pub fn largest_scc(net: &TrustNetwork) -> Vec<NodeId> {
    strongly_connected_components(net)
        .into_iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .unwrap_or_default()
}
