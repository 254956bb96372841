//! Connected components of run-length fields (4-connectivity).

use serde::{Deserialize, Serialize};

use super::grid::GridField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub compact_count: usize,
    pub touching_count: usize,
    /// Euler characteristic `V - E + F` of each compact component.
    pub euler_per_compact: Vec<i64>,
    pub stable: bool,
}

impl ComponentReport {
    pub fn total(&self) -> usize {
        self.compact_count + self.touching_count
    }

    pub(crate) fn same_counts(&self, other: &ComponentReport) -> bool {
        self.compact_count == other.compact_count
            && self.euler_per_compact == other.euler_per_compact
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi] = lo;
    }
}

/// Labels the field and classifies components as compact (no contact with
/// an open box edge) or touching. Stability is not assessed here and is
/// reported as `true`.
pub fn component_analysis(f: &GridField) -> ComponentReport {
    let mut start = Vec::with_capacity(f.rows.len() + 1);
    let mut total = 0usize;
    for r in &f.rows {
        start.push(total);
        total += r.len();
    }
    start.push(total);
    let mut parent: Vec<usize> = (0..total).collect();
    // vertical adjacency: (run in row j, run in row j + 1, overlap length)
    let mut pairs: Vec<(usize, usize, i64)> = Vec::new();
    for j in 0..f.rows.len().saturating_sub(1) {
        let (ra, rb) = (&f.rows[j], &f.rows[j + 1]);
        let (mut x, mut y) = (0, 0);
        while x < ra.len() && y < rb.len() {
            let (a0, a1) = ra[x];
            let (b0, b1) = rb[y];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                let (ia, ib) = (start[j] + x, start[j + 1] + y);
                union(&mut parent, ia, ib);
                pairs.push((ia, ib, (hi - lo + 1) as i64));
            }
            if a1 < b1 {
                x += 1;
            } else {
                y += 1;
            }
        }
    }

    let last_row = f.rows.len().saturating_sub(1);
    let last_col = f.ncols.saturating_sub(1) as u32;
    let mut euler = vec![0i64; total];
    let mut touching = vec![false; total];
    for (j, r) in f.rows.iter().enumerate() {
        for (x, &(a, b)) in r.iter().enumerate() {
            let id = start[j] + x;
            let root = find(&mut parent, id);
            // V - E_horizontal for a run of length len
            euler[root] += 1;
            let t = (f.open.left && a == 0)
                || (f.open.right && b == last_col)
                || (f.open.bottom && j == 0)
                || (f.open.top && j == last_row);
            if t {
                touching[root] = true;
            }
        }
    }
    for &(ia, _, ov) in &pairs {
        let root = find(&mut parent, ia);
        // ov vertical edges and ov - 1 unit squares
        euler[root] += -ov + (ov - 1);
    }

    let mut report = ComponentReport {
        compact_count: 0,
        touching_count: 0,
        euler_per_compact: Vec::new(),
        stable: true,
    };
    for id in 0..total {
        if find(&mut parent, id) == id {
            if touching[id] {
                report.touching_count += 1;
            } else {
                report.compact_count += 1;
                report.euler_per_compact.push(euler[id]);
            }
        }
    }
    report
}
