//! Slippery grid world with holes.
//!
//! The agent starts top-left and must reach the goal bottom-right. The chosen
//! direction is taken with probability `p`; otherwise the agent slips to one
//! of the two orthogonal directions with probability `(1 - p) / 2` each. Moves
//! off the grid leave the agent in place.
//!
//! Arriving in a cell pays `1 / (d + 1)^3`, `d` being the Manhattan distance
//! to the goal, except that the goal pays 1 and holes pay 0. Goal and holes
//! are terminal.
//!
//! The planning model differs from the true dynamics only in cells next to a
//! hole, where the intended direction is over-trusted: `p + rho` instead of
//! `p`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GenerativeModel, SampleRng, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    Start,
    Frozen,
    Hole,
    Goal,
}

impl Cell {
    fn from_char(c: char) -> Option<Cell> {
        match c {
            'S' => Some(Cell::Start),
            'F' => Some(Cell::Frozen),
            'H' => Some(Cell::Hole),
            'G' => Some(Cell::Goal),
            _ => None,
        }
    }

    fn to_char(self) -> char {
        match self {
            Cell::Start => 'S',
            Cell::Frozen => 'F',
            Cell::Hole => 'H',
            Cell::Goal => 'G',
        }
    }
}

/// Rectangular map, one character per cell from `{S, F, H, G}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

/// The usual 8x8 layout.
pub const STANDARD_8X8: &str = "\
SFFFFFFF
FFFFFFFF
FFFHFFFF
FFFFFHFF
FFFHFFFF
FHHFFFHF
FHFFHFHF
FFFHFFFG
";

impl GridMap {
    pub fn standard() -> Self {
        STANDARD_8X8.parse().expect("built-in map is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, index: usize) -> Cell {
        self.cells[index]
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    pub fn position(&self, index: usize) -> (usize, usize) {
        (index / self.cols, index % self.cols)
    }

    pub fn goal(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn manhattan_to_goal(&self, index: usize) -> usize {
        let (r, c) = self.position(index);
        (self.rows - 1 - r) + (self.cols - 1 - c)
    }

    /// Cell reached by moving from `index` in `dir`; walls keep the agent put.
    pub fn step(&self, index: usize, dir: Direction) -> usize {
        let (r, c) = self.position(index);
        match dir {
            Direction::Left if c > 0 => index - 1,
            Direction::Down if r + 1 < self.rows => index + self.cols,
            Direction::Right if c + 1 < self.cols => index + 1,
            Direction::Up if r > 0 => index - self.cols,
            _ => index,
        }
    }

    /// Non-hole cells sharing an edge with a hole.
    pub fn hole_adjacent(&self) -> Vec<bool> {
        (0..self.len())
            .map(|i| {
                self.cells[i] != Cell::Hole
                    && Direction::ALL
                        .iter()
                        .any(|&d| self.step(i, d) != i && self.cells[self.step(i, d)] == Cell::Hole)
            })
            .collect()
    }
}

impl FromStr for GridMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if lines.is_empty() {
            return Err(Error::input("empty map"));
        }
        let cols = lines[0].chars().count();
        let mut cells = Vec::with_capacity(lines.len() * cols);
        for (r, line) in lines.iter().enumerate() {
            if line.chars().count() != cols {
                return Err(Error::input(format!(
                    "map row {} has {} cells, expected {cols}",
                    r + 1,
                    line.chars().count()
                )));
            }
            for c in line.chars() {
                cells.push(
                    Cell::from_char(c)
                        .ok_or_else(|| Error::input(format!("unknown map cell `{c}`")))?,
                );
            }
        }
        let map = GridMap {
            rows: lines.len(),
            cols,
            cells,
        };
        if map.len() < 2 {
            return Err(Error::input("map needs at least two cells"));
        }
        if map.cells[0] != Cell::Start {
            return Err(Error::input("start must be the top-left cell"));
        }
        if map.cells[map.goal()] != Cell::Goal {
            return Err(Error::input("goal must be the bottom-right cell"));
        }
        let starts = map.cells.iter().filter(|&&c| c == Cell::Start).count();
        let goals = map.cells.iter().filter(|&&c| c == Cell::Goal).count();
        if starts != 1 || goals != 1 {
            return Err(Error::input("map needs exactly one start and one goal"));
        }
        Ok(map)
    }
}

impl fmt::Display for GridMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| self.cells[self.index(r, c)].to_char())
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Action encoding: 0 = left, 1 = down, 2 = right, 3 = up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Down,
    Right,
    Up,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Left,
        Direction::Down,
        Direction::Right,
        Direction::Up,
    ];

    pub fn from_action(action: usize) -> Direction {
        Direction::ALL[action % 4]
    }

    /// The two slip directions.
    pub fn orthogonal(self) -> [Direction; 2] {
        match self {
            Direction::Left | Direction::Right => [Direction::Down, Direction::Up],
            Direction::Down | Direction::Up => [Direction::Left, Direction::Right],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrozenLakeConfig {
    /// Map file; the standard 8x8 layout when absent.
    pub map_file: Option<String>,
    /// Probability of moving in the intended direction.
    pub p_true: f64,
    /// Over-trust of the intended direction in the planning model near holes.
    pub rho: f64,
    pub max_steps: usize,
}

impl Default for FrozenLakeConfig {
    fn default() -> Self {
        FrozenLakeConfig {
            map_file: None,
            p_true: 0.4,
            rho: 0.3,
            max_steps: 150,
        }
    }
}

impl FrozenLakeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_true > 0.0 && self.p_true <= 1.0) {
            return Err(Error::param(format!(
                "p_true must lie in (0, 1], got {}",
                self.p_true
            )));
        }
        if !(0.0..=1.0).contains(&self.rho) || self.p_true + self.rho > 1.0 + 1e-12 {
            return Err(Error::param(format!(
                "need 0 <= rho and p_true + rho <= 1, got p_true = {}, rho = {}",
                self.p_true, self.rho
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridMap> {
        match &self.map_file {
            Some(path) => GridMap::load(path),
            None => Ok(GridMap::standard()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FrozenLake {
    grid: GridMap,
    hole_adjacent: Vec<bool>,
    p_true: f64,
    rho: f64,
    /// Intended-direction probability in hole-adjacent cells.
    p_adjacent: f64,
}

/// The real dynamics.
pub fn frozenlake_true_model(config: &FrozenLakeConfig) -> Result<FrozenLake> {
    FrozenLake::build(config, config.grid()?, false)
}

/// The misspecified model the agent plans with.
pub fn frozenlake_planning_model(config: &FrozenLakeConfig) -> Result<FrozenLake> {
    FrozenLake::build(config, config.grid()?, true)
}

impl FrozenLake {
    pub fn build(config: &FrozenLakeConfig, grid: GridMap, misspecified: bool) -> Result<Self> {
        config.validate()?;
        let p_adjacent = if misspecified {
            (config.p_true + config.rho).min(1.0)
        } else {
            config.p_true
        };
        Ok(FrozenLake {
            hole_adjacent: grid.hole_adjacent(),
            grid,
            p_true: config.p_true,
            rho: config.rho,
            p_adjacent,
        })
    }

    pub fn grid(&self) -> &GridMap {
        &self.grid
    }

    pub fn is_hole_adjacent(&self, state: usize) -> bool {
        self.hole_adjacent[state]
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        matches!(self.grid.cell(state), Cell::Hole | Cell::Goal)
    }

    pub fn arrival_reward(&self, state: usize) -> f64 {
        match self.grid.cell(state) {
            Cell::Goal => 1.0,
            Cell::Hole => 0.0,
            _ => {
                let d = self.grid.manhattan_to_goal(state) as f64 + 1.0;
                1.0 / (d * d * d)
            }
        }
    }

    fn intended_probability(&self, state: usize) -> f64 {
        if self.hole_adjacent[state] {
            self.p_adjacent
        } else {
            self.p_true
        }
    }

    /// `(destination, probability)` for intended, first slip, second slip.
    pub fn outcomes(&self, state: usize, action: usize) -> [(usize, f64); 3] {
        let dir = Direction::from_action(action);
        let p = self.intended_probability(state);
        let slip = (1.0 - p) / 2.0;
        let [o1, o2] = dir.orthogonal();
        [
            (self.grid.step(state, dir), p),
            (self.grid.step(state, o1), slip),
            (self.grid.step(state, o2), slip),
        ]
    }

    /// Next-cell law as a dense vector over cells.
    pub fn next_state_law(&self, state: usize, action: usize) -> Vec<f64> {
        let mut law = vec![0.0; self.grid.len()];
        for (dest, p) in self.outcomes(state, action) {
            law[dest] += p;
        }
        law
    }

    /// Arrival reward averaged over this model's next-cell law.
    pub fn expected_reward(&self, state: usize, action: usize) -> f64 {
        self.outcomes(state, action)
            .iter()
            .map(|&(dest, p)| p * self.arrival_reward(dest))
            .sum()
    }
}

impl GenerativeModel for FrozenLake {
    type State = usize;

    fn num_actions(&self) -> usize {
        4
    }

    fn initial_state(&self) -> usize {
        0
    }

    fn sample(&self, state: &usize, action: usize, rng: &mut SampleRng) -> Transition<usize> {
        let state = *state;
        if self.is_terminal(state) {
            return Transition::new(state, 0.0, true);
        }
        let [(intended, p), (slip_a, slip), (slip_b, _)] = self.outcomes(state, action);
        let u: f64 = rng.random();
        let next = if u < p {
            intended
        } else if u < p + slip {
            slip_a
        } else {
            slip_b
        };
        Transition {
            next_state: next,
            reward: self.expected_reward(state, action),
            realized_reward: self.arrival_reward(next),
            terminal: self.is_terminal(next),
        }
    }

    fn rho(&self, state: &usize, _action: usize) -> f64 {
        if self.hole_adjacent[*state] {
            self.rho
        } else {
            0.0
        }
    }

    fn is_success(
        &self,
        state: &usize,
        _terminated: bool,
        _steps: usize,
        _max_steps: usize,
    ) -> bool {
        self.grid.cell(*state) == Cell::Goal
    }
}
