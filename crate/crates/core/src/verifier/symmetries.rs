//! Linear automorphisms of N₁(X) permuting the 36 rays of Curv(X) and fixing
//! the canonical degree.
//!
//! Such a map sends the K-negative rays `lᵢ` to each other and the K-trivial
//! rays `C_ij` to each other, so it is fixed by a permutation `σ` of the `lᵢ`
//! and the image of `C₁₂`; the image of `l = C₁₂ + l₁ + l₂` follows.

use std::collections::HashSet;

use serde_json::json;

use super::{timed, Certificate};
use crate::model::{N1_DIM, POINTS};

type Vec9 = [i64; N1_DIM];
/// Columns are the images of `l, l₁, …, l₈`.
pub type CurveMatrix = [Vec9; N1_DIM];

fn line(i: usize) -> Vec9 {
    let mut v = [0; N1_DIM];
    v[i] = 1;
    v
}

fn secant(i: usize, j: usize) -> Vec9 {
    let mut v = [0; N1_DIM];
    v[0] = 1;
    v[i] = -1;
    v[j] = -1;
    v
}

fn add(a: &Vec9, b: &Vec9) -> Vec9 {
    std::array::from_fn(|k| a[k] + b[k])
}

fn sub(a: &Vec9, b: &Vec9) -> Vec9 {
    std::array::from_fn(|k| a[k] - b[k])
}

fn is_secant(v: &Vec9) -> bool {
    v[0] == 1 && v[1..].iter().filter(|&&x| x == -1).count() == 2 && v[1..].iter().filter(|&&x| x == 0).count() == POINTS - 2
}

#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    pub order: usize,
    /// Elements that are not index relabelings, as explicit matrices.
    pub extra: Vec<CurveMatrix>,
    /// Elements fixing every `lᵢ`.
    pub fixing_lines: usize,
    pub generators: Vec<CurveMatrix>,
}

/// Heap's algorithm over `0..n`, calling `visit` on every permutation.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            visit(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// The candidate map sending `lᵢ ↦ l_{σ(i)}` and `C₁₂ ↦ target`, if it
/// permutes the 28 secant lines.
fn candidate(sigma: &[usize], target: &Vec9) -> Option<CurveMatrix> {
    let images: Vec<Vec9> = sigma.iter().map(|&s| line(s + 1)).collect();
    let l_image = add(&add(target, &images[0]), &images[1]);
    let mut seen = HashSet::with_capacity(28);
    for i in 0..POINTS {
        for j in i + 1..POINTS {
            let img = sub(&sub(&l_image, &images[i]), &images[j]);
            if !is_secant(&img) || !seen.insert(img) {
                return None;
            }
        }
    }
    let mut m = [[0; N1_DIM]; N1_DIM];
    m[0] = l_image;
    m[1..].copy_from_slice(&images);
    Some(m)
}

fn is_relabeling(m: &CurveMatrix, sigma_of: impl Fn(usize) -> usize) -> bool {
    m[0] == line(0) && (0..POINTS).all(|i| m[i + 1] == line(sigma_of(i) + 1))
}

pub fn symmetry_group() -> SymmetryGroup {
    let targets: Vec<Vec9> = (1..=POINTS)
        .flat_map(|i| (i + 1..=POINTS).map(move |j| secant(i, j)))
        .collect();
    let mut order = 0;
    let mut extra = Vec::new();
    let mut fixing_lines = 0;
    let mut generators = Vec::new();
    let transposition: Vec<usize> = [1, 0, 2, 3, 4, 5, 6, 7].to_vec();
    let cycle: Vec<usize> = (0..POINTS).map(|i| (i + 1) % POINTS).collect();
    for_each_permutation(POINTS, |sigma| {
        for t in &targets {
            if let Some(m) = candidate(sigma, t) {
                order += 1;
                if sigma.iter().enumerate().all(|(i, &s)| i == s) {
                    fixing_lines += 1;
                }
                if !is_relabeling(&m, |i| sigma[i]) {
                    extra.push(m);
                } else if sigma == transposition.as_slice() || sigma == cycle.as_slice() {
                    generators.push(m);
                }
            }
        }
    });
    generators.sort();
    generators.extend(extra.iter().cloned());
    SymmetryGroup {
        order,
        extra,
        fixing_lines,
        generators,
    }
}

pub fn nef_symmetries() -> Certificate {
    timed("nef_symmetries", || {
        let g = symmetry_group();
        (
            g.order >= 40320 && g.fixing_lines == 1,
            json!({
                "order": g.order,
                "fixing_all_lines": g.fixing_lines,
                "non_relabeling_elements": g.extra.len(),
                "generators": g.generators,
                "extra_elements": g.extra,
            }),
        )
    })
}
