//! Named fans used by tests, the corpus generator and the curated suite.

use exact_core::{ivec, IntVec};

use crate::Fan;

/// P^n: rays e_1..e_n and −Σe_i; maximal cones omit one ray each.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<IntVec> = (0..n)
        .map(|i| {
            let mut v = vec![0i64; n];
            v[i] = 1;
            ivec(&v)
        })
        .collect();
    rays.push(ivec(&vec![-1; n]));
    let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
    Fan::new(n, rays, cones).expect("projective space")
}

pub fn product(a: &Fan, b: &Fan) -> Fan {
    let (ra, rb) = (a.rank(), b.rank());
    let mut rays: Vec<IntVec> = Vec::new();
    for r in a.rays() {
        let mut v = r.clone();
        v.extend(std::iter::repeat_n(exact_core::int(0), rb));
        rays.push(v);
    }
    for r in b.rays() {
        let mut v: IntVec = std::iter::repeat_n(exact_core::int(0), ra).collect();
        v.extend(r.iter().cloned());
        rays.push(v);
    }
    let na = a.rays().len();
    let mut cones = Vec::new();
    for ca in a.max_cones() {
        for cb in b.max_cones() {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|i| i + na));
            cones.push(c);
        }
    }
    Fan::new(ra + rb, rays, cones).expect("product fan")
}

/// Hirzebruch surface F_a: rays (1,0), (0,1), (−1,a), (0,−1).
pub fn hirzebruch(a: i64) -> Fan {
    let rays = vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, a]), ivec(&[0, -1])];
    Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).expect("Hirzebruch")
}

/// F_1 presented as the blowup of P² at a fixed point: rays (1,0),(0,1),(1,1),(−1,−1).
pub fn blown_up_plane() -> Fan {
    let rays = vec![ivec(&[1, 0]), ivec(&[1, 1]), ivec(&[0, 1]), ivec(&[-1, -1])];
    Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).expect("F1")
}

/// Weighted projective plane P(1,1,2): rays (1,0), (0,1), (−1,−2).
pub fn weighted_p112() -> Fan {
    let rays = vec![ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -2])];
    Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![2, 0]]).expect("P(1,1,2)")
}

/// Complete fan over the faces of the cube [−1,1]³: 8 rays, 6 square cones.
pub fn cube_faces() -> Fan {
    let mut rays = Vec::new();
    for x in [-1, 1] {
        for y in [-1, 1] {
            for z in [-1, 1] {
                rays.push(ivec(&[x, y, z]));
            }
        }
    }
    let mut cones = Vec::new();
    for axis in 0..3 {
        for side in [-1, 1] {
            let c: Vec<usize> = (0..8).filter(|&i| rays[i][axis] == exact_core::int(side)).collect();
            cones.push(c);
        }
    }
    Fan::new(3, rays, cones).expect("cube fan")
}

/// Rays u1=(1,0,0), u2=(0,1,0), u3=(0,0,1), u4=(1,1,−k).
fn circuit_rays(k: i64) -> Vec<IntVec> {
    vec![ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1]), ivec(&[1, 1, -k])]
}

/// The side with cones {u1,u2,u3} and {u1,u2,u4}; k = 1 is the flop, k = 2 the flip.
pub fn flip_side_a(k: i64) -> Fan {
    Fan::new(3, circuit_rays(k), vec![vec![0, 1, 2], vec![0, 1, 3]]).expect("flip side A")
}

/// The other triangulation of the same circuit: {u1,u3,u4} and {u2,u3,u4}.
pub fn flip_side_b(k: i64) -> Fan {
    Fan::new(3, circuit_rays(k), vec![vec![0, 2, 3], vec![1, 2, 3]]).expect("flip side B")
}

/// The affine cone over the circuit (the common contraction target).
pub fn flip_base(k: i64) -> Fan {
    Fan::new(3, circuit_rays(k), vec![vec![0, 1, 2, 3]]).expect("flip base")
}
