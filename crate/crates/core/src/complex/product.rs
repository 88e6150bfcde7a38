use super::simplex::VertexId;
use super::simplicial::SimplicialComplex;

/// Staircase triangulation of `|X| × |Z|` with its two simplicial
/// projections, given as vertex maps.
#[derive(Clone, Debug)]
pub struct StaircaseProduct {
    pub complex: SimplicialComplex,
    pub to_left: Vec<VertexId>,
    pub to_right: Vec<VertexId>,
}

/// Vertex `(x, z)` gets id `x·|Z| + z`, which is the lexicographic order.
/// Each pair of maximal cells contributes one simplex per monotone lattice
/// path through its vertex grid.
pub fn staircase_product(x: &SimplicialComplex, z: &SimplicialComplex) -> StaircaseProduct {
    let nz = z.num_vertices();
    let id = |a: VertexId, b: VertexId| a * nz + b;
    let mut labels = Vec::new();
    let mut coords = Vec::new();
    let mut to_left = Vec::new();
    let mut to_right = Vec::new();
    for a in 0..x.num_vertices() {
        for b in 0..nz {
            labels.push(id(a, b).to_string());
            coords.push(x.coords(a).iter().chain(z.coords(b)).cloned().collect());
            to_left.push(a);
            to_right.push(b);
        }
    }
    let mut maximal = Vec::new();
    for s in x.maximal_cells() {
        for t in z.maximal_cells() {
            let (sv, tv) = (x.cell(s).vertices(), z.cell(t).vertices());
            for path in lattice_paths(sv.len() - 1, tv.len() - 1) {
                maximal.push(path.iter().map(|&(i, j)| id(sv[i], tv[j])).collect());
            }
        }
    }
    let complex = SimplicialComplex::assemble(x.ambient_dim() + z.ambient_dim(), labels, coords, maximal);
    StaircaseProduct { complex, to_left, to_right }
}

fn lattice_paths(p: usize, q: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![(0, 0)]];
    while let Some(path) = stack.pop() {
        let (i, j) = *path.last().unwrap();
        if (i, j) == (p, q) {
            out.push(path);
            continue;
        }
        if i < p {
            let mut next = path.clone();
            next.push((i + 1, j));
            stack.push(next);
        }
        if j < q {
            let mut next = path;
            next.push((i, j + 1));
            stack.push(next);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn path_counts_are_binomial() {
        for p in 0..4 {
            for q in 0..4 {
                assert_eq!(lattice_paths(p, q).len(), binomial(p + q, p));
            }
        }
    }

    #[test]
    fn square_and_cylinder() {
        let edge = SimplicialComplex::from_int_coords(&[&[0], &[1]], &[&[0, 1]]).unwrap();
        let sq = staircase_product(&edge, &edge);
        assert_eq!(sq.complex.f_vector(), vec![4, 5, 2]);
        sq.complex.validate_embedding().unwrap();

        let circle =
            SimplicialComplex::from_int_coords(&[&[0, 0], &[1, 0], &[0, 1]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
        let cyl = staircase_product(&circle, &edge);
        assert_eq!(cyl.complex.f_vector(), vec![6, 12, 6]);
        assert_eq!(cyl.complex.euler_characteristic(), 0);
        cyl.complex.validate_embedding().unwrap();
    }

    #[test]
    fn point_factor_is_neutral() {
        let edge = SimplicialComplex::from_int_coords(&[&[0], &[1]], &[&[0, 1]]).unwrap();
        let p = staircase_product(&SimplicialComplex::point(), &edge);
        assert_eq!(p.complex.f_vector(), edge.f_vector());
        assert_eq!(p.to_right, vec![0, 1]);
    }
}
