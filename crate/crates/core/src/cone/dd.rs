//! Double description: converts `{x : a_i · x >= 0}` into extreme rays plus a
//! lineality basis. Constraints are inserted in the order given.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{int_dot, primitive_int};

#[derive(Clone, Debug)]
pub struct DdOutput {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

struct Ray {
    v: Vec<BigInt>,
    zero: FixedBitSet,
}

fn combine(alpha: &BigInt, x: &[BigInt], beta: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    let v = x.iter().zip(y).map(|(a, b)| alpha * a - beta * b).collect();
    primitive_int(v)
}

pub fn double_description(constraints: &[Vec<BigInt>], dim: usize) -> DdOutput {
    let n = constraints.len();
    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, a) in constraints.iter().enumerate() {
        debug_assert_eq!(a.len(), dim);
        if let Some(pos) = lineality.iter().position(|b| !int_dot(a, b).is_zero()) {
            let mut b = lineality.remove(pos);
            let mut ab = int_dot(a, &b);
            if ab.is_negative() {
                b.iter_mut().for_each(|x| *x = -&*x);
                ab = -ab;
            }
            for other in lineality.iter_mut() {
                let s = int_dot(a, other);
                if !s.is_zero() {
                    *other = combine(&ab, other, &s, &b);
                }
            }
            for r in rays.iter_mut() {
                let s = int_dot(a, &r.v);
                if !s.is_zero() {
                    r.v = combine(&ab, &r.v, &s, &b);
                }
                r.zero.insert(idx);
            }
            let mut zero = FixedBitSet::with_capacity(n);
            zero.insert_range(0..idx);
            rays.push(Ray { v: b, zero });
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|r| int_dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zero.insert(idx);
                }
            }
            continue;
        }

        let threshold = dim.saturating_sub(lineality.len() + 2);
        let mut created: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let mut common = rays[p].zero.clone();
                common.intersect_with(&rays[q].zero);
                if common.count_ones(..) < threshold {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(w, r)| {
                    w != p && w != q && common.is_subset(&r.zero)
                });
                if blocked {
                    continue;
                }
                let v = combine(&values[p], &rays[q].v, &values[q], &rays[p].v);
                common.insert(idx);
                created.push(Ray { v, zero: common });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (mut r, v) in rays.into_iter().zip(values) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zero.insert(idx);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    DdOutput {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lineality,
    }
}
