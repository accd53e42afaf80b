#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use acrawler::crawler::Pixel;
use acrawler::{AgentState, CrawlerConfig, Direction, GrayImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straight-line crawler simulator written from the rule list, kept free of
/// any code shared with the library engine.
pub fn literal_simulation(
    image: &GrayImage,
    cfg: &CrawlerConfig,
    direction: Direction,
    start: &[Pixel],
) -> (Vec<usize>, Vec<AgentState>) {
    let (w, h) = (image.width() as i64, image.height() as i64);
    let intensity = |x: i64, y: i64| image.pixels()[(y * w + x) as usize] as i64;

    // rule 1: born with identical energy
    let mut pos: Vec<(i64, i64)> = start.iter().map(|p| (p.x as i64, p.y as i64)).collect();
    let mut energy: Vec<f64> = vec![cfg.initial_energy; start.len()];
    let mut alive: Vec<bool> = vec![true; start.len()];
    let mut psi = vec![start.len()];

    for _t in 1..=cfg.t_max {
        // rule 3, decided synchronously from the previous positions
        let previous: HashSet<(i64, i64)> = (0..pos.len()).filter(|&i| alive[i]).map(|i| pos[i]).collect();
        let mut next = pos.clone();
        for i in 0..pos.len() {
            if !alive[i] {
                continue;
            }
            let (x, y) = pos[i];
            let here = intensity(x, y);
            let mut eta = Vec::new();
            for qy in 0..h {
                for qx in 0..w {
                    let d2 = (qx - x) * (qx - x) + (qy - y) * (qy - y);
                    if d2 >= 1 && (d2 as f64).sqrt() <= 2f64.sqrt() {
                        eta.push((qx, qy));
                    }
                }
            }
            let better: Vec<(i64, i64)> = eta
                .into_iter()
                .filter(|&(qx, qy)| match direction {
                    Direction::Max => intensity(qx, qy) > here,
                    Direction::Min => intensity(qx, qy) < here,
                })
                .collect();
            if better.is_empty() {
                continue; // (a) settle
            }
            let extreme = match direction {
                Direction::Max => better.iter().map(|&(qx, qy)| intensity(qx, qy)).max().unwrap(),
                Direction::Min => better.iter().map(|&(qx, qy)| intensity(qx, qy)).min().unwrap(),
            };
            let best: Vec<(i64, i64)> = better.into_iter().filter(|&(qx, qy)| intensity(qx, qy) == extreme).collect();
            if best.len() == 1 {
                next[i] = best[0]; // (b)
            } else {
                let taken: Vec<(i64, i64)> = best.iter().copied().filter(|q| previous.contains(q)).collect();
                next[i] = *taken.first().unwrap_or(&best[0]); // (c)
            }
        }
        pos = next;

        // rule 4
        for i in 0..pos.len() {
            if alive[i] {
                energy[i] -= cfg.energy_per_step;
            }
        }

        // rule 5
        let mut crowd: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
        for i in 0..pos.len() {
            if alive[i] {
                crowd.entry(pos[i]).or_default().push(i);
            }
        }
        for members in crowd.values() {
            let mut winner = members[0];
            for &j in &members[1..] {
                if energy[j] > energy[winner] {
                    winner = j;
                }
            }
            for &j in members {
                if j != winner {
                    alive[j] = false;
                }
            }
        }

        for i in 0..pos.len() {
            if !alive[i] {
                continue;
            }
            // rule 6
            energy[i] = energy[i] + cfg.absorption * intensity(pos[i].0, pos[i].1) as f64;
            // rule 7
            if energy[i] >= cfg.max_energy {
                energy[i] = cfg.max_energy;
            }
            // rule 2
            if energy[i] <= cfg.min_energy + 1e-12 {
                alive[i] = false;
            }
        }
        psi.push(alive.iter().filter(|&&a| a).count());
    }

    let agents = (0..pos.len())
        .map(|i| AgentState {
            position: Pixel::new(pos[i].0 as usize, pos[i].1 as usize),
            energy: energy[i],
            alive: alive[i],
        })
        .collect();
    (psi, agents)
}

/// Image with intensities drawn from `levels` distinct values, so plateaus
/// and ties are common when `levels` is small.
pub fn random_image(rng: &mut impl Rng, width: usize, height: usize, levels: u32) -> GrayImage {
    let palette: Vec<u8> = (0..levels).map(|_| rng.random()).collect();
    GrayImage::from_fn(width, height, |_, _| palette[rng.random_range(0..levels as usize)]).unwrap()
}

/// Fixed family of small images (1x1 up to 8x8) with mixed intensity depth.
pub fn oracle_family(count: usize) -> Vec<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC4_A11E);
    (0..count)
        .map(|i| {
            let w = rng.random_range(1..=8);
            let h = rng.random_range(1..=8);
            let levels = [2, 3, 5, 16, 256][i % 5];
            random_image(&mut rng, w, h, levels)
        })
        .collect()
}

/// Steps a swarm to `t_max`, checking the per-iteration invariants.
/// Returns the live-agent curve.
pub fn check_evolution_invariants(image: &GrayImage, cfg: &CrawlerConfig, direction: Direction) -> Result<Vec<usize>, String> {
    let mut swarm = acrawler::crawler::Swarm::new(image, cfg, direction).map_err(|e| e.to_string())?;
    let n = cfg.agent_count(image);
    let mut psi = vec![swarm.alive()];
    if psi[0] != n {
        return Err(format!("psi(0) = {} but n = {n}", psi[0]));
    }
    for t in 1..=cfg.t_max {
        let alive = swarm.step();
        let agents = swarm.agents();
        let live: Vec<&AgentState> = agents.iter().filter(|a| a.alive).collect();
        if live.len() != alive {
            return Err(format!("t={t}: reported {alive} alive, found {}", live.len()));
        }
        if alive > *psi.last().unwrap() {
            return Err(format!("t={t}: psi increased from {} to {alive}", psi.last().unwrap()));
        }
        let mut seen = HashSet::new();
        for a in &live {
            if !seen.insert(a.position) {
                return Err(format!("t={t}: two live agents on {:?}", a.position));
            }
            if !(a.energy > cfg.min_energy && a.energy <= cfg.max_energy) {
                return Err(format!("t={t}: live agent energy {} outside (e_min, e_max]", a.energy));
            }
        }
        for a in &agents {
            if a.position.x >= image.width() || a.position.y >= image.height() {
                return Err(format!("t={t}: agent left the image at {:?}", a.position));
            }
        }
        psi.push(alive);
    }
    Ok(psi)
}

/// Single-step kernel duality between `I` under max and `255 - I` under min.
pub fn check_duality(image: &GrayImage, occupied: &[bool]) -> Result<(), String> {
    let negative = image.inverted();
    for y in 0..image.height() {
        for x in 0..image.width() {
            let p = Pixel::new(x, y);
            let up = acrawler::movement_kernel(p, image, occupied, Direction::Max);
            let down = acrawler::movement_kernel(p, &negative, occupied, Direction::Min);
            if up != down {
                return Err(format!("at {p:?}: max on I -> {up:?}, min on 255-I -> {down:?}"));
            }
            let down = acrawler::movement_kernel(p, image, occupied, Direction::Min);
            let up = acrawler::movement_kernel(p, &negative, occupied, Direction::Max);
            if up != down {
                return Err(format!("at {p:?}: min on I -> {down:?}, max on 255-I -> {up:?}"));
            }
        }
    }
    Ok(())
}

pub fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
pub fn invert(matrix: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        let p = a[col][col];
        assert!(p.abs() > 1e-300, "singular matrix");
        for v in a[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for k in 0..2 * n {
                        a[row][k] -= f * a[col][k];
                    }
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Two-class Fisher discriminant from first principles: pooled unbiased
/// within-class covariance, `w = Σ⁻¹(μ0 - μ1)`, threshold at the midpoint
/// shifted by the log prior ratio.
pub struct FisherOracle {
    pub direction: Vec<f64>,
    pub threshold: f64,
}

impl FisherOracle {
    pub fn fit(x: &[Vec<f64>], y: &[usize]) -> Self {
        let d = x[0].len();
        let mut mean = [vec![0.0; d], vec![0.0; d]];
        let mut count = [0usize; 2];
        for (row, &c) in x.iter().zip(y) {
            count[c] += 1;
            for j in 0..d {
                mean[c][j] += row[j];
            }
        }
        for c in 0..2 {
            for j in 0..d {
                mean[c][j] /= count[c] as f64;
            }
        }
        let mut cov = vec![vec![0.0; d]; d];
        for (row, &c) in x.iter().zip(y) {
            for a in 0..d {
                for b in 0..d {
                    cov[a][b] += (row[a] - mean[c][a]) * (row[b] - mean[c][b]);
                }
            }
        }
        let dof = (x.len() - 2) as f64;
        cov.iter_mut().flatten().for_each(|v| *v /= dof);
        let inv = invert(&cov);
        let diff: Vec<f64> = (0..d).map(|j| mean[0][j] - mean[1][j]).collect();
        let direction: Vec<f64> = (0..d).map(|a| (0..d).map(|b| inv[a][b] * diff[b]).sum()).collect();
        let mid: Vec<f64> = (0..d).map(|j| 0.5 * (mean[0][j] + mean[1][j])).collect();
        let prior_ratio = (count[0] as f64 / count[1] as f64).ln();
        let threshold = dot(&direction, &mid) - prior_ratio;
        FisherOracle { direction, threshold }
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        if dot(&self.direction, x) >= self.threshold {
            0
        } else {
            1
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Random two-class problem: `n_per_class` samples in `d` dimensions with a
/// random mixing matrix and shifted means.
pub fn random_two_class(rng: &mut impl Rng, n_per_class: usize, d: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mix: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| gaussian(rng)).collect()).collect();
    let shift: Vec<f64> = (0..d).map(|_| 2.0 * gaussian(rng)).collect();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for c in 0..2 {
        for _ in 0..n_per_class {
            let z: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
            let row: Vec<f64> = (0..d)
                .map(|a| dot(&mix[a], &z) + if c == 1 { shift[a] } else { 0.0 })
                .collect();
            x.push(row);
            y.push(c);
        }
    }
    (x, y)
}

/// Writes `classes` x `per_class` synthetic gratings (one frequency per
/// class) as PGM files under `root/<class>/`.
pub fn write_grating_dataset(root: &std::path::Path, freqs: &[f64], per_class: usize, size: usize) {
    use acrawler::imgio::{synth_texture, SynthParams, TextureKind};
    for (c, &f) in freqs.iter().enumerate() {
        let dir = root.join(format!("class{c}"));
        std::fs::create_dir_all(&dir).unwrap();
        for i in 0..per_class {
            let p = SynthParams {
                frequency: f,
                angle: 0.3 * i as f64,
                noise: 0.2,
                seed: (c * 1000 + i) as u64,
                ..Default::default()
            };
            let img = synth_texture(TextureKind::Grating, &p, size, size).unwrap();
            std::fs::write(dir.join(format!("img{i:02}.pgm")), img.to_pgm()).unwrap();
        }
    }
}
