//! Independent oracles shared by the integration tests. Everything here
//! deliberately avoids the library's own shortcuts: the minimax oracle
//! searches the full game tree without the threshold reduction or
//! memoization, and the distance oracle is a plain Floyd-Warshall.
#![allow(dead_code)]

use colgame::forest::Forest;
use colgame::power::PowerView;

/// Game colouring number by brute-force minimax over complete marking
/// orders. Alice (to move when an even number is marked) minimizes the
/// final score, Bob maximizes it.
pub fn naive_colg(power: &PowerView) -> u32 {
    let n = power.vertex_count();
    let mut marked = vec![false; n];
    minimax(power, &mut marked, 0, 0)
}

fn minimax(power: &PowerView, marked: &mut [bool], placed: usize, max_bd: u32) -> u32 {
    let n = marked.len();
    if placed == n {
        return max_bd + 1;
    }
    let alice = placed % 2 == 0;
    let mut best: Option<u32> = None;
    for v in 0..n {
        if marked[v] {
            continue;
        }
        let bd = power.neighbours(v).iter().filter(|&&u| marked[u]).count() as u32;
        marked[v] = true;
        let value = minimax(power, marked, placed + 1, max_bd.max(bd));
        marked[v] = false;
        best = Some(match best {
            None => value,
            Some(b) if alice => b.min(value),
            Some(b) => b.max(value),
        });
    }
    best.expect("at least one unmarked vertex")
}

/// All-pairs distances by Floyd-Warshall; `None` for unreachable pairs.
pub fn distance_matrix(forest: &Forest) -> Vec<Vec<Option<u32>>> {
    let n = forest.vertex_count();
    const INF: u32 = u32::MAX / 4;
    let mut dist = vec![vec![INF; n]; n];
    for v in 0..n {
        dist[v][v] = 0;
        for &u in forest.neighbours(v) {
            dist[v][u] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|d| if d >= INF { None } else { Some(d) })
                .collect()
        })
        .collect()
}

/// Every labelled forest on exactly `n` vertices, by filtering the edge
/// subsets of the complete graph through a union-find cycle check.
pub fn enumerate_forests(n: usize) -> Vec<Forest> {
    assert!(n <= 6, "edge-subset enumeration is for tiny n only");
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
        }
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut parent: Vec<usize> = (0..n).collect();
        let mut edges = Vec::new();
        let mut acyclic = true;
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                acyclic = false;
                break;
            }
            parent[ru] = rv;
            edges.push((u, v));
        }
        if acyclic {
            out.push(Forest::from_edges(n, &edges).expect("acyclic by construction"));
        }
    }
    out
}

fn find(parent: &mut Vec<usize>, v: usize) -> usize {
    let mut r = v;
    while parent[r] != r {
        r = parent[r];
    }
    let mut cur = v;
    while parent[cur] != r {
        let next = parent[cur];
        parent[cur] = r;
        cur = next;
    }
    r
}
