//! Aggregated metrics for a simulated run.

use serde::Serialize;

use crate::runtime::RunStats;

/// Cycle and structure metrics for one network run.
///
/// `cycles_per_block` is the steady-state initiation interval estimated from
/// the completion instants of consecutive output blocks;
/// `pipeline_fill_latency` is the instant the first block completed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsReport {
    pub total_cycles: u64,
    pub cycles_per_block: f64,
    pub pipeline_fill_latency: u64,
    pub process_count: usize,
    pub channel_count: usize,
    pub max_concurrent_active: usize,
}

impl MetricsReport {
    /// Assemble a report from run statistics plus the logical completion
    /// instants of each output block (ascending).
    pub fn from_run(stats: &RunStats, completions: &[u64]) -> Self {
        let total_cycles = stats.total_cycles();
        let (cycles_per_block, pipeline_fill_latency) = match completions {
            [] => (0.0, 0),
            [only] => (total_cycles as f64, *only),
            many => {
                let first = many[0];
                let last = *many.last().expect("nonempty");
                (
                    (last - first) as f64 / (many.len() - 1) as f64,
                    first,
                )
            }
        };
        MetricsReport {
            total_cycles,
            cycles_per_block,
            pipeline_fill_latency,
            process_count: stats.process_count,
            channel_count: stats.channel_count,
            max_concurrent_active: stats.max_concurrent_active(),
        }
    }

    /// Line-oriented `key=value` form, one field per line.
    pub fn to_kv_text(&self) -> String {
        format!(
            "total_cycles={}\ncycles_per_block={}\npipeline_fill_latency={}\nprocess_count={}\nchannel_count={}\nmax_concurrent_active={}\n",
            self.total_cycles,
            self.cycles_per_block,
            self.pipeline_fill_latency,
            self.process_count,
            self.channel_count,
            self.max_concurrent_active,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization")
    }
}
