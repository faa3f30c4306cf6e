//! Small named graphs used by tests and experiments. Vertices are labelled
//! `v0, v1, ...` and rooted at `v0`.

use super::Graph;

fn build(n: usize, pairs: &[(usize, usize)]) -> Graph {
    Graph::with_default_labels(n, pairs).expect("fixture is valid")
}

pub fn single_edge() -> Graph {
    build(2, &[(0, 1)])
}

pub fn triangle() -> Graph {
    build(3, &[(0, 1), (0, 2), (1, 2)])
}

/// Path `v0 - v1 - ... - v(n-1)` rooted at an end.
pub fn path(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, &pairs)
}

pub fn cycle(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &pairs)
}

pub fn complete(n: usize) -> Graph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    build(n, &pairs)
}

pub fn k4() -> Graph {
    complete(4)
}

/// Star with center `v0` and `n` leaves.
pub fn star(n: usize) -> Graph {
    let pairs: Vec<_> = (1..=n).map(|i| (0, i)).collect();
    build(n + 1, &pairs)
}

/// Triangle with a pendant edge at `v2`.
pub fn paw() -> Graph {
    build(4, &[(0, 1), (0, 2), (1, 2), (2, 3)])
}

/// 4-cycle with one chord.
pub fn diamond() -> Graph {
    build(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
}

/// Two triangles sharing the vertex `v0`.
pub fn bowtie() -> Graph {
    build(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])
}

/// Named fixture lookup.
pub fn by_name(name: &str) -> Option<Graph> {
    Some(match name {
        "single-edge" => single_edge(),
        "triangle" => triangle(),
        "4-cycle" => cycle(4),
        "5-cycle" => cycle(5),
        "k4" => k4(),
        "k5" => complete(5),
        "2-star" => star(2),
        "3-star" => star(3),
        "4-star" => star(4),
        "path-4" => path(4),
        "paw" => paw(),
        "diamond" => diamond(),
        "bowtie" => bowtie(),
        _ => return None,
    })
}

/// Every named fixture, in a fixed order.
pub fn all() -> Vec<(&'static str, Graph)> {
    [
        "single-edge",
        "triangle",
        "4-cycle",
        "5-cycle",
        "k4",
        "k5",
        "2-star",
        "3-star",
        "4-star",
        "path-4",
        "paw",
        "diamond",
        "bowtie",
    ]
    .into_iter()
    .map(|n| (n, by_name(n).expect("listed")))
    .collect()
}
