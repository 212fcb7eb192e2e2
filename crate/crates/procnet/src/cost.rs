/// Logical-time cost model for simulated runs.
///
/// Every completed channel rendezvous advances the clocks of both partners
/// by `cycles_per_rendezvous`; `Proc::work(n)` advances the calling process
/// by `n * cycles_per_primitive_op`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CostModel {
    pub cycles_per_rendezvous: u64,
    pub cycles_per_primitive_op: u64,
}

impl CostModel {
    /// One cycle per rendezvous and per primitive operation.
    pub fn unit() -> Self {
        CostModel {
            cycles_per_rendezvous: 1,
            cycles_per_primitive_op: 1,
        }
    }

    /// Free communication and computation; runs still produce correct data.
    pub fn zero() -> Self {
        CostModel {
            cycles_per_rendezvous: 0,
            cycles_per_primitive_op: 0,
        }
    }
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::unit()
    }
}
