//! Simulated-cycle measurement over the network designs.

use procnet::{CostModel, MetricsReport, RunMode};

use super::{serpent_encrypt_net, NetError, NetworkDesign, RunOptions};
use crate::cipher::{encrypt_blocks, Block};
use crate::schedule::{key_schedule, Key256};

/// Execute a design under the deterministic stepped scheduler and report
/// cycle and structure metrics alongside the ciphertexts.
pub fn run_with_metrics(
    design: NetworkDesign,
    key: &Key256,
    blocks: &[Block],
    cost: CostModel,
    seed: u64,
) -> Result<(Vec<Block>, MetricsReport), NetError> {
    let opts = RunOptions {
        mode: RunMode::Stepped { seed },
        cost,
        ..RunOptions::default()
    };
    let run = serpent_encrypt_net(design, key, blocks, opts)?;
    let report = MetricsReport::from_run(&run.stats, &run.completions);
    Ok((run.ciphertexts, report))
}

#[derive(Clone, Debug)]
pub struct ComparisonRow {
    pub design: NetworkDesign,
    pub label: String,
    pub report: MetricsReport,
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub blocks: usize,
    pub rows: Vec<ComparisonRow>,
}

/// Run every design on the same inputs, checking that all ciphertexts match
/// the sequential reference; any mismatch is a hard failure.
pub fn compare_designs(
    designs: &[NetworkDesign],
    key: &Key256,
    blocks: &[Block],
    cost: CostModel,
) -> Result<Comparison, NetError> {
    let reference = encrypt_blocks(&key_schedule(key), blocks);
    let mut rows = Vec::with_capacity(designs.len());
    for design in designs {
        let (ciphertexts, report) = run_with_metrics(*design, key, blocks, cost, 0)?;
        if ciphertexts != reference {
            return Err(NetError::OutputMismatch(format!(
                "design {design} disagrees with the sequential reference"
            )));
        }
        rows.push(ComparisonRow {
            design: *design,
            label: design.to_string(),
            report,
        });
    }
    Ok(Comparison {
        blocks: blocks.len(),
        rows,
    })
}
