//! Artificial-crawler evolution on a grayscale image.
//!
//! Every iteration applies, in this order: movement (all agents decide from
//! the positions at the previous iteration), energy consumption, the law of
//! the jungle (one survivor per pixel, highest energy wins, lower agent index
//! wins ties), absorption of `λ·I(p)` at the new pixel, the energy cap and
//! finally the survival threshold. The live-agent count after each iteration
//! is recorded in a [`LiveAgentCurve`].

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::imgio::GrayImage;

/// Absolute slack on the survival comparison `e <= e_min`.
pub const DEATH_TOLERANCE: f64 = 1e-12;

const VACANT: u32 = u32::MAX;

/// Direction an agent crawls along the intensity surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Toward strictly brighter neighbours.
    Max,
    /// Toward strictly darker neighbours.
    Min,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Max => "max",
            Direction::Min => "min",
        }
    }

    #[inline]
    fn better(self, candidate: u8, current: u8) -> bool {
        match self {
            Direction::Max => candidate > current,
            Direction::Min => candidate < current,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which curves make up a signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    Max,
    Min,
    Both,
}

impl Kernel {
    pub fn directions(self) -> &'static [Direction] {
        match self {
            Kernel::Max => &[Direction::Max],
            Kernel::Min => &[Direction::Min],
            Kernel::Both => &[Direction::Max, Direction::Min],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Max => "max",
            Kernel::Min => "min",
            Kernel::Both => "both",
        }
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Kernel::Max),
            "min" => Ok(Kernel::Min),
            "both" => Ok(Kernel::Both),
            other => Err(Error::Parameter(format!("unknown kernel {other:?} (expected max, min or both)"))),
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    /// `n` distinct pixels drawn uniformly with a seeded generator.
    RandomWithoutReplacement,
    /// One agent per pixel in row-major order; `n_agents` is ignored.
    DeterministicAllPixels,
}

impl FromStr for Placement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Placement::RandomWithoutReplacement),
            "all-pixels" => Ok(Placement::DeterministicAllPixels),
            other => Err(Error::Parameter(format!("unknown placement {other:?} (expected random or all-pixels)"))),
        }
    }
}

impl Placement {
    pub fn name(self) -> &'static str {
        match self {
            Placement::RandomWithoutReplacement => "random",
            Placement::DeterministicAllPixels => "all-pixels",
        }
    }
}

/// Evolution parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CrawlerConfig {
    /// Energy every agent is born with.
    pub initial_energy: f64,
    /// Survival threshold; an agent with `e <= min_energy` dies.
    pub min_energy: f64,
    /// Energy cap.
    pub max_energy: f64,
    /// Energy consumed per iteration.
    pub energy_per_step: f64,
    /// Absorption rate per intensity unit.
    pub absorption: f64,
    pub n_agents: usize,
    pub t_max: usize,
    pub kernel: Kernel,
    pub placement: Placement,
    pub seed: u64,
}

impl Default for CrawlerConfig {
    fn default() -> Self {
        CrawlerConfig {
            initial_energy: 10.0,
            min_energy: 1.0,
            max_energy: 12.0,
            energy_per_step: 1.0,
            absorption: 0.01,
            n_agents: 1000,
            t_max: 41,
            kernel: Kernel::Both,
            placement: Placement::RandomWithoutReplacement,
            seed: 0,
        }
    }
}

impl CrawlerConfig {
    /// Checks the image-independent invariants.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.initial_energy,
            self.min_energy,
            self.max_energy,
            self.energy_per_step,
            self.absorption,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Config("energy parameters must be finite".into()));
        }
        if !(0.0 < self.min_energy && self.min_energy < self.initial_energy && self.initial_energy <= self.max_energy) {
            return Err(Error::Config(format!(
                "need 0 < e_min < initial energy <= e_max, got e_min={} initial={} e_max={}",
                self.min_energy, self.initial_energy, self.max_energy
            )));
        }
        if self.energy_per_step <= 0.0 {
            return Err(Error::Config(format!("energy per step {} must be positive", self.energy_per_step)));
        }
        if self.absorption < 0.0 {
            return Err(Error::Config(format!("absorption rate {} must be non-negative", self.absorption)));
        }
        if self.n_agents == 0 && self.placement == Placement::RandomWithoutReplacement {
            return Err(Error::Config("at least one agent is required".into()));
        }
        if self.t_max == 0 {
            return Err(Error::Config("t_max must be at least 1".into()));
        }
        Ok(())
    }

    /// Checks the config against a concrete image.
    pub fn validate_for(&self, image: &GrayImage) -> Result<()> {
        self.validate()?;
        if image.len() > VACANT as usize {
            return Err(Error::Config(format!("image with {} pixels is too large", image.len())));
        }
        if self.placement == Placement::RandomWithoutReplacement && self.n_agents > image.len() {
            return Err(Error::Config(format!(
                "{} agents do not fit on {} pixels without replacement",
                self.n_agents,
                image.len()
            )));
        }
        Ok(())
    }

    /// Number of agents actually placed on `image`.
    pub fn agent_count(&self, image: &GrayImage) -> usize {
        match self.placement {
            Placement::RandomWithoutReplacement => self.n_agents,
            Placement::DeterministicAllPixels => image.len(),
        }
    }

    /// Compact `key=value;...` description used to tag exported features.
    pub fn digest(&self) -> String {
        format!(
            "kernel={};n={};tmax={};eps={};emin={};emax={};unit={};lambda={};place={};seed={}",
            self.kernel,
            self.n_agents,
            self.t_max,
            self.initial_energy,
            self.min_energy,
            self.max_energy,
            self.energy_per_step,
            self.absorption,
            self.placement.name(),
            self.seed
        )
    }
}

/// A pixel coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixel {
    pub x: usize,
    pub y: usize,
}

impl Pixel {
    pub fn new(x: usize, y: usize) -> Self {
        Pixel { x, y }
    }

    fn index(self, width: usize) -> usize {
        self.y * width + self.x
    }

    fn from_index(idx: usize, width: usize) -> Self {
        Pixel {
            x: idx % width,
            y: idx / width,
        }
    }
}

/// The eight-connected in-bounds neighbours of `p`, row-major.
pub fn neighbors(p: Pixel, width: usize, height: usize) -> Vec<Pixel> {
    let mut out = Vec::with_capacity(8);
    for_each_neighbor(p.index(width), width, height, |q| out.push(Pixel::from_index(q, width)));
    out
}

#[inline(always)]
fn for_each_neighbor(idx: usize, width: usize, height: usize, mut f: impl FnMut(usize)) {
    let (x, y) = (idx % width, idx / width);
    let x0 = x.saturating_sub(1);
    let x1 = (x + 1).min(width - 1);
    let y0 = y.saturating_sub(1);
    let y1 = (y + 1).min(height - 1);
    for ny in y0..=y1 {
        let row = ny * width;
        for nx in x0..=x1 {
            if nx != x || ny != y {
                f(row + nx);
            }
        }
    }
}

#[inline]
fn choose_move(image: &GrayImage, idx: usize, direction: Direction, occupied: impl Fn(usize) -> bool) -> usize {
    let pixels = image.pixels();
    let mut best: Option<u8> = None;
    let mut first = idx;
    let mut first_occupied = None;
    for_each_neighbor(idx, image.width(), image.height(), |q| {
        let v = pixels[q];
        let target = best.unwrap_or(pixels[idx]);
        if direction.better(v, target) {
            best = Some(v);
            first = q;
            first_occupied = occupied(q).then_some(q);
        } else if best == Some(v) && first_occupied.is_none() && occupied(q) {
            first_occupied = Some(q);
        }
    });
    first_occupied.unwrap_or(first)
}

/// Where an agent at `pos` moves next.
///
/// The agent stays when no neighbour is strictly better (brighter for
/// [`Direction::Max`], darker for [`Direction::Min`]). Otherwise it moves to
/// the best neighbour; among several equally good ones it prefers the first
/// occupied one in row-major order, else the first one.
///
/// `occupied` is indexed row-major and must have one entry per pixel.
pub fn movement_kernel(pos: Pixel, image: &GrayImage, occupied: &[bool], direction: Direction) -> Pixel {
    assert_eq!(occupied.len(), image.len(), "occupancy map does not match image");
    let w = image.width();
    let next = choose_move(image, pos.index(w), direction, |q| occupied[q]);
    Pixel::from_index(next, w)
}

/// One agent's position, energy and liveness.
///
/// Dead agents keep the position and energy they had when they died.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub position: Pixel,
    pub energy: f64,
    pub alive: bool,
}

/// ψ(t) for `t = 0..=t_max` under one movement direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiveAgentCurve {
    pub direction: Direction,
    pub counts: Vec<usize>,
}

impl LiveAgentCurve {
    pub fn t_max(&self) -> usize {
        self.counts.len() - 1
    }
}

/// Result of one [`evolve`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub curve: LiveAgentCurve,
    pub agents: Vec<AgentState>,
}

#[derive(Debug, Clone, Copy)]
struct Agent {
    pos: u32,
    energy: f64,
    alive: bool,
}

/// Initial positions for `image` under `config`'s placement policy.
pub fn place_agents(image: &GrayImage, config: &CrawlerConfig) -> Result<Vec<Pixel>> {
    config.validate_for(image)?;
    let w = image.width();
    Ok(match config.placement {
        Placement::RandomWithoutReplacement => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            index::sample(&mut rng, image.len(), config.n_agents)
                .into_iter()
                .map(|i| Pixel::from_index(i, w))
                .collect()
        }
        Placement::DeterministicAllPixels => (0..image.len()).map(|i| Pixel::from_index(i, w)).collect(),
    })
}

/// A population of crawlers advancing one iteration at a time.
#[derive(Debug, Clone)]
pub struct Swarm<'a> {
    image: &'a GrayImage,
    config: CrawlerConfig,
    direction: Direction,
    agents: Vec<Agent>,
    /// Index of the live agent on each pixel, or `VACANT`.
    owner: Vec<u32>,
    targets: Vec<u32>,
    alive: usize,
    t: usize,
}

impl<'a> Swarm<'a> {
    /// Places agents according to `config.placement`.
    pub fn new(image: &'a GrayImage, config: &CrawlerConfig, direction: Direction) -> Result<Self> {
        let positions = place_agents(image, config)?;
        Swarm::from_positions(image, config, direction, &positions)
    }

    /// Starts from explicit, pairwise distinct positions.
    pub fn from_positions(
        image: &'a GrayImage,
        config: &CrawlerConfig,
        direction: Direction,
        positions: &[Pixel],
    ) -> Result<Self> {
        config.validate()?;
        if positions.is_empty() {
            return Err(Error::Config("at least one agent is required".into()));
        }
        if image.len() > VACANT as usize {
            return Err(Error::Config(format!("image with {} pixels is too large", image.len())));
        }
        let w = image.width();
        let mut owner = vec![VACANT; image.len()];
        let mut agents = Vec::with_capacity(positions.len());
        for (i, p) in positions.iter().enumerate() {
            if p.x >= w || p.y >= image.height() {
                return Err(Error::Config(format!("agent {i} at ({}, {}) lies outside the image", p.x, p.y)));
            }
            let idx = p.index(w);
            if owner[idx] != VACANT {
                return Err(Error::Config(format!("two agents placed on pixel ({}, {})", p.x, p.y)));
            }
            owner[idx] = i as u32;
            agents.push(Agent {
                pos: idx as u32,
                energy: config.initial_energy,
                alive: true,
            });
        }
        Ok(Swarm {
            image,
            config: config.clone(),
            direction,
            alive: agents.len(),
            targets: vec![0; agents.len()],
            agents,
            owner,
            t: 0,
        })
    }

    /// Number of live agents.
    pub fn alive(&self) -> usize {
        self.alive
    }

    /// Iterations completed so far.
    pub fn iteration(&self) -> usize {
        self.t
    }

    pub fn agents(&self) -> Vec<AgentState> {
        let w = self.image.width();
        self.agents
            .iter()
            .map(|a| AgentState {
                position: Pixel::from_index(a.pos as usize, w),
                energy: a.energy,
                alive: a.alive,
            })
            .collect()
    }

    /// Advances one iteration and returns the live-agent count.
    pub fn step(&mut self) -> usize {
        let image = self.image;
        let cfg = &self.config;

        // movement, decided from the positions at t-1
        {
            let owner = &self.owner;
            for (agent, target) in self.agents.iter().zip(self.targets.iter_mut()) {
                if agent.alive {
                    *target = choose_move(image, agent.pos as usize, self.direction, |q| owner[q] != VACANT) as u32;
                }
            }
        }
        for agent in self.agents.iter().filter(|a| a.alive) {
            self.owner[agent.pos as usize] = VACANT;
        }

        // move, consume, law of the jungle
        for i in 0..self.agents.len() {
            if !self.agents[i].alive {
                continue;
            }
            let target = self.targets[i];
            let agent = &mut self.agents[i];
            agent.pos = target;
            agent.energy -= cfg.energy_per_step;
            let slot = &mut self.owner[target as usize];
            if *slot == VACANT {
                *slot = i as u32;
            } else {
                let rival = *slot as usize;
                // earlier index wins ties
                if self.agents[i].energy > self.agents[rival].energy {
                    self.agents[rival].alive = false;
                    self.owner[target as usize] = i as u32;
                } else {
                    self.agents[i].alive = false;
                }
                self.alive -= 1;
            }
        }

        // absorb, cap, survival threshold
        let pixels = image.pixels();
        for agent in self.agents.iter_mut().filter(|a| a.alive) {
            agent.energy += cfg.absorption * pixels[agent.pos as usize] as f64;
            if agent.energy > cfg.max_energy {
                agent.energy = cfg.max_energy;
            }
            if agent.energy <= cfg.min_energy + DEATH_TOLERANCE {
                agent.alive = false;
                self.owner[agent.pos as usize] = VACANT;
                self.alive -= 1;
            }
        }

        self.t += 1;
        self.alive
    }

    /// Runs the remaining iterations up to `t_max`.
    pub fn run(mut self) -> Evolution {
        let mut counts = Vec::with_capacity(self.config.t_max + 1);
        counts.push(self.alive);
        while self.t < self.config.t_max {
            counts.push(self.step());
        }
        Evolution {
            curve: LiveAgentCurve {
                direction: self.direction,
                counts,
            },
            agents: self.agents(),
        }
    }
}

/// Runs one evolution of `t_max` iterations.
pub fn evolve(image: &GrayImage, config: &CrawlerConfig, direction: Direction) -> Result<Evolution> {
    Ok(Swarm::new(image, config, direction)?.run())
}

/// Runs an evolution from explicit initial positions.
pub fn evolve_from(
    image: &GrayImage,
    config: &CrawlerConfig,
    direction: Direction,
    positions: &[Pixel],
) -> Result<Evolution> {
    Ok(Swarm::from_positions(image, config, direction, positions)?.run())
}

/// Live-agent curves for every direction in `config.kernel`, all starting
/// from the same placement.
pub fn curves(image: &GrayImage, config: &CrawlerConfig) -> Result<Vec<LiveAgentCurve>> {
    let positions = place_agents(image, config)?;
    config
        .kernel
        .directions()
        .iter()
        .map(|&d| evolve_from(image, config, d, &positions).map(|e| e.curve))
        .collect()
}

/// Concatenated live-agent curves, `[ψ_max, ψ_min]` for [`Kernel::Both`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub values: Vec<f64>,
    pub kernel: Kernel,
    pub t_max: usize,
    /// Counts were divided by the number of agents.
    pub normalized: bool,
}

impl Signature {
    /// Concatenates `curves` in order; `n_agents` is the normaliser.
    pub fn from_curves(curves: &[LiveAgentCurve], kernel: Kernel, n_agents: usize, normalized: bool) -> Self {
        let t_max = curves.first().map_or(0, LiveAgentCurve::t_max);
        let scale = if normalized { 1.0 / n_agents as f64 } else { 1.0 };
        let values = curves
            .iter()
            .flat_map(|c| c.counts.iter().map(move |&v| v as f64 * scale))
            .collect();
        Signature {
            values,
            kernel,
            t_max,
            normalized,
        }
    }
}

/// Crawler descriptor of `image`.
pub fn signature(image: &GrayImage, config: &CrawlerConfig, normalized: bool) -> Result<Signature> {
    let curves = curves(image, config)?;
    Ok(Signature::from_curves(&curves, config.kernel, config.agent_count(image), normalized))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(w: usize, h: usize, px: &[u8]) -> GrayImage {
        GrayImage::new(w, h, px.to_vec()).unwrap()
    }

    #[test]
    fn neighbor_counts() {
        assert_eq!(neighbors(Pixel::new(2, 2), 5, 5).len(), 8);
        assert_eq!(neighbors(Pixel::new(0, 0), 5, 5).len(), 3);
        assert_eq!(neighbors(Pixel::new(2, 0), 5, 5).len(), 5);
        assert_eq!(neighbors(Pixel::new(4, 3), 5, 5).len(), 5);
        assert!(neighbors(Pixel::new(0, 0), 1, 1).is_empty());
    }

    #[test]
    fn neighbors_are_row_major() {
        let n = neighbors(Pixel::new(1, 1), 3, 3);
        let expect: Vec<_> = [(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2), (2, 2)]
            .iter()
            .map(|&(x, y)| Pixel::new(x, y))
            .collect();
        assert_eq!(n, expect);
    }

    #[test]
    fn settles_on_local_peak() {
        let image = img(3, 3, &[100, 100, 100, 100, 200, 100, 100, 100, 100]);
        let occ = vec![false; 9];
        assert_eq!(movement_kernel(Pixel::new(1, 1), &image, &occ, Direction::Max), Pixel::new(1, 1));
    }

    #[test]
    fn moves_to_unique_brighter_neighbor() {
        let image = img(3, 3, &[100, 100, 100, 100, 100, 100, 100, 100, 200]);
        let occ = vec![false; 9];
        assert_eq!(movement_kernel(Pixel::new(1, 1), &image, &occ, Direction::Max), Pixel::new(2, 2));
        // and the min kernel ignores equal neighbours
        assert_eq!(movement_kernel(Pixel::new(1, 1), &image, &occ, Direction::Min), Pixel::new(1, 1));
    }

    #[test]
    fn tie_prefers_occupied_candidate() {
        let image = img(3, 3, &[200, 100, 100, 100, 100, 100, 100, 100, 200]);
        let mut occ = vec![false; 9];
        assert_eq!(movement_kernel(Pixel::new(1, 1), &image, &occ, Direction::Max), Pixel::new(0, 0));
        occ[8] = true;
        assert_eq!(movement_kernel(Pixel::new(1, 1), &image, &occ, Direction::Max), Pixel::new(2, 2));
        occ[0] = true;
        assert_eq!(movement_kernel(Pixel::new(1, 1), &image, &occ, Direction::Max), Pixel::new(0, 0));
    }

    #[test]
    fn occupied_non_best_neighbor_is_ignored() {
        let image = img(3, 1, &[150, 100, 200]);
        let occ = vec![true, false, false];
        assert_eq!(movement_kernel(Pixel::new(1, 0), &image, &occ, Direction::Max), Pixel::new(2, 0));
        assert_eq!(movement_kernel(Pixel::new(1, 0), &image, &occ, Direction::Min), Pixel::new(1, 0));
    }

    #[test]
    fn uniform_black_dies_at_nine() {
        let image = GrayImage::constant(10, 10, 0).unwrap();
        let cfg = CrawlerConfig {
            n_agents: 30,
            t_max: 15,
            ..Default::default()
        };
        for d in [Direction::Max, Direction::Min] {
            let evo = evolve(&image, &cfg, d).unwrap();
            let mut expect = vec![30; 9];
            expect.extend(std::iter::repeat_n(0, 7));
            assert_eq!(evo.curve.counts, expect);
        }
    }

    #[test]
    fn uniform_white_never_dies() {
        let image = GrayImage::constant(10, 10, 255).unwrap();
        let cfg = CrawlerConfig {
            n_agents: 30,
            t_max: 20,
            ..Default::default()
        };
        let evo = evolve(&image, &cfg, Direction::Max).unwrap();
        assert!(evo.curve.counts.iter().all(|&c| c == 30));
        assert!(evo.agents.iter().all(|a| a.alive && a.energy == 12.0));
    }

    #[test]
    fn stronger_agent_eats_weaker() {
        // both agents climb onto the bright pixel at t=1
        let image = img(3, 1, &[0, 255, 0]);
        let cfg = CrawlerConfig {
            t_max: 1,
            ..Default::default()
        };
        let evo = evolve_from(&image, &cfg, Direction::Max, &[Pixel::new(0, 0), Pixel::new(2, 0)]).unwrap();
        assert_eq!(evo.curve.counts, vec![2, 1]);
        // equal energies: lower index survives
        assert!(evo.agents[0].alive);
        assert!(!evo.agents[1].alive);
        assert_eq!(evo.agents[1].position, Pixel::new(1, 0));
    }

    #[test]
    fn config_errors() {
        let image = GrayImage::constant(4, 4, 0).unwrap();
        let too_many = CrawlerConfig {
            n_agents: 17,
            ..Default::default()
        };
        assert!(matches!(evolve(&image, &too_many, Direction::Max), Err(Error::Config(_))));
        let bad = CrawlerConfig {
            min_energy: 11.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let zero_t = CrawlerConfig {
            t_max: 0,
            ..Default::default()
        };
        assert!(zero_t.validate().is_err());
    }

    #[test]
    fn all_pixels_placement_ignores_n() {
        let image = GrayImage::constant(5, 4, 255).unwrap();
        let cfg = CrawlerConfig {
            placement: Placement::DeterministicAllPixels,
            n_agents: 1_000_000,
            t_max: 3,
            ..Default::default()
        };
        let evo = evolve(&image, &cfg, Direction::Max).unwrap();
        assert_eq!(evo.curve.counts, vec![20; 4]);
    }

    #[test]
    fn signature_lengths() {
        let image = GrayImage::constant(20, 20, 0).unwrap();
        let both = CrawlerConfig {
            n_agents: 50,
            t_max: 7,
            ..Default::default()
        };
        assert_eq!(signature(&image, &both, true).unwrap().values.len(), 16);
        let max = CrawlerConfig {
            kernel: Kernel::Max,
            t_max: 41,
            ..both
        };
        assert_eq!(signature(&image, &max, true).unwrap().values.len(), 42);
    }

    #[test]
    fn uniform_black_signature() {
        let image = GrayImage::constant(20, 20, 0).unwrap();
        let cfg = CrawlerConfig {
            n_agents: 50,
            t_max: 12,
            ..Default::default()
        };
        let sig = signature(&image, &cfg, true).unwrap();
        let mut half = vec![1.0; 9];
        half.extend(std::iter::repeat_n(0.0, 4));
        let expect: Vec<f64> = half.iter().chain(half.iter()).copied().collect();
        assert_eq!(sig.values, expect);
        let raw = signature(&image, &cfg, false).unwrap();
        assert_eq!(raw.values[0], 50.0);
    }

    #[test]
    fn kernel_parsing() {
        assert_eq!("both".parse::<Kernel>().unwrap(), Kernel::Both);
        assert!("up".parse::<Kernel>().is_err());
    }
}
