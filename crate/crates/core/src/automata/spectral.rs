use num_traits::Float;

use crate::error::{Error, Result};

/// Iteration cap for a single irreducible block.
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Relative gap between the Collatz–Wielandt bounds at which iteration stops.
pub fn tolerance<T: Float>() -> T {
    let floor = T::from(1e-12).unwrap();
    let scaled = T::epsilon() * T::from(64.0).unwrap();
    if scaled > floor {
        scaled
    } else {
        floor
    }
}

/// Spectral radius of a square non-negative matrix.
///
/// The matrix is split into strongly connected blocks; the radius is the
/// largest radius of an irreducible block. Each block is handled by power
/// iteration on `B + I`, which is primitive, so the iteration converges even
/// for periodic blocks. The Collatz–Wielandt bounds
/// `min (Bx)_i/x_i ≤ ϱ ≤ max (Bx)_i/x_i` give the stopping rule.
pub fn spectral_radius<T: Float>(matrix: &[Vec<T>]) -> Result<T> {
    let n = matrix.len();
    for row in matrix {
        if row.len() != n {
            return Err(Error::Argument("matrix is not square".into()));
        }
        if row.iter().any(|x| !x.is_finite() || *x < T::zero()) {
            return Err(Error::Argument("matrix has a negative or non-finite entry".into()));
        }
    }
    let adjacency: Vec<Vec<(usize, T)>> = matrix
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, x)| **x > T::zero())
                .map(|(j, x)| (j, *x))
                .collect()
        })
        .collect();
    let mut radius = T::zero();
    for block in strongly_connected_components(&adjacency) {
        let r = block_radius(&adjacency, &block)?;
        if r > radius {
            radius = r;
        }
    }
    Ok(radius)
}

fn block_radius<T: Float>(adjacency: &[Vec<(usize, T)>], block: &[usize]) -> Result<T> {
    let mut local = vec![usize::MAX; adjacency.len()];
    for (k, &v) in block.iter().enumerate() {
        local[v] = k;
    }
    let edges: Vec<Vec<(usize, T)>> = block
        .iter()
        .map(|&v| {
            adjacency[v]
                .iter()
                .filter(|(w, _)| local[*w] != usize::MAX)
                .map(|(w, x)| (local[*w], *x))
                .collect()
        })
        .collect();
    if block.len() == 1 {
        return Ok(edges[0].first().map_or(T::zero(), |(_, x)| *x));
    }
    let tol = tolerance::<T>();
    let mut x = vec![T::one(); block.len()];
    let mut y = vec![T::zero(); block.len()];
    for _ in 0..MAX_ITERATIONS {
        for (i, row) in edges.iter().enumerate() {
            y[i] = row.iter().fold(x[i], |acc, (j, m)| acc + *m * x[*j]);
        }
        let mut lo = T::infinity();
        let mut hi = T::zero();
        let mut top = T::zero();
        for i in 0..x.len() {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
            top = top.max(y[i]);
        }
        if hi - lo <= tol * hi {
            return Ok((lo + hi) / T::from(2.0).unwrap() - T::one());
        }
        for i in 0..x.len() {
            x[i] = y[i] / top;
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
    })
}

/// Tarjan's algorithm, iterative.
pub(crate) fn strongly_connected_components<T>(adjacency: &[Vec<(usize, T)>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = work.last_mut() {
            if let Some(&(w, _)) = adjacency[v].get(*next) {
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
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
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrices() {
        assert_eq!(spectral_radius(&[vec![4.0]]).unwrap(), 4.0);
        let r = spectral_radius(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!((r - 2.0).abs() < 1e-10);
        let r = spectral_radius(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
        assert_eq!(spectral_radius::<f64>(&[]).unwrap(), 0.0);
    }

    #[test]
    fn defective_and_nilpotent() {
        let r = spectral_radius(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let r = spectral_radius(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn single_precision() {
        let r: f32 = spectral_radius(&[vec![2.0f32, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!((r - 3.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(spectral_radius(&[vec![1.0, 2.0]]).is_err());
        assert!(spectral_radius(&[vec![-1.0]]).is_err());
    }
}
