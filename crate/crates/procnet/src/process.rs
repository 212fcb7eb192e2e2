//! Process templates and the feed operator.
//!
//! A [`Stage`] is an unwired process (or subnetwork) with one input port and
//! one output port. [`feed`] composes two stages by opening a hidden bundle
//! for the connecting channels, after checking the port shapes agree.

use std::sync::{Arc, Mutex};

use crate::port::{Nil, PortSpec, StreamOf, VectorOf};
use crate::runtime::Network;
use crate::shape::{Shape, ShapeError};

type BuildFn<I, O> =
    Box<dyn FnOnce(&mut Network, <I as PortSpec>::Rx, <O as PortSpec>::Tx) + Send>;

/// A process template with shape-checked input and output ports.
pub struct Stage<I: PortSpec, O: PortSpec> {
    name: String,
    input: I,
    output: O,
    build: BuildFn<I, O>,
}

impl<I: PortSpec, O: PortSpec> Stage<I, O> {
    pub fn new(
        name: impl Into<String>,
        input: I,
        output: O,
        build: impl FnOnce(&mut Network, I::Rx, O::Tx) + Send + 'static,
    ) -> Self {
        Stage {
            name: name.into(),
            input,
            output,
            build: Box::new(build),
        }
    }

    /// A single process that performs one whole input transfer, charges
    /// `ops` primitive operations, and performs one output transfer.
    pub fn from_fn(
        name: impl Into<String>,
        input: I,
        output: O,
        ops: u64,
        f: impl FnOnce(I::Value) -> O::Value + Send + 'static,
    ) -> Self {
        let name = name.into();
        let proc_name = name.clone();
        let in_spec = input.clone();
        let out_spec = output.clone();
        Stage::new(name, input, output, move |net, rx, tx| {
            net.spawn(&proc_name, move |p| {
                let v = in_spec.store(p, &rx);
                p.work(ops);
                out_spec.produce(p, &tx, f(v));
            });
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input_spec(&self) -> &I {
        &self.input
    }

    pub fn output_spec(&self) -> &O {
        &self.output
    }

    pub fn input_shape(&self) -> Shape {
        self.input.shape()
    }

    pub fn output_shape(&self) -> Shape {
        self.output.shape()
    }

    /// Wire the stage into `net` with the given endpoints.
    pub fn instantiate(self, net: &mut Network, rx: I::Rx, tx: O::Tx) {
        (self.build)(net, rx, tx);
    }

    /// Open fresh ports for the stage and return their loose ends.
    pub fn spawn_open(self, net: &mut Network) -> (I::Tx, O::Rx) {
        let (in_tx, in_rx) = self.input.clone().open(net, &format!("{}.in", self.name));
        let (out_tx, out_rx) = self.output.clone().open(net, &format!("{}.out", self.name));
        self.instantiate(net, in_rx, out_tx);
        (in_tx, out_rx)
    }
}

/// Feed: run both stages concurrently with the first one's output connected
/// to the second one's input; the connecting channels stay internal.
pub fn feed<I, M, O>(first: Stage<I, M>, second: Stage<M, O>) -> Result<Stage<I, O>, ShapeError>
where
    I: PortSpec,
    M: PortSpec,
    O: PortSpec,
{
    let out_shape = first.output_shape();
    let in_shape = second.input_shape();
    if out_shape != in_shape {
        return Err(ShapeError::Mismatch {
            output: out_shape,
            input: in_shape,
        });
    }
    let mid_spec = first.output.clone();
    let name = format!("({} >> {})", first.name, second.name);
    let mid_name = format!("{name}.mid");
    Ok(Stage::new(
        name,
        first.input.clone(),
        second.output.clone(),
        move |net, rx, tx| {
            let (mtx, mrx) = mid_spec.open(net, &mid_name);
            first.instantiate(net, rx, mtx);
            second.instantiate(net, mrx, tx);
        },
    ))
}

/// One process that emits a single whole transfer of `value`.
///
/// Vector-length mismatches are a configuration error and surface here, at
/// network construction, before any process runs.
pub fn producer<S: PortSpec>(name: impl Into<String>, spec: S, value: S::Value) -> Stage<Nil, S> {
    let name = name.into();
    if let Err(shape) = spec.check_value(&value) {
        panic!("producer '{name}': value does not fit port shape {shape}");
    }
    let proc_name = name.clone();
    let out_spec = spec.clone();
    Stage::new(name, Nil, spec, move |net, _rx, tx| {
        net.spawn(&proc_name, move |p| {
            out_spec.produce(p, &tx, value);
        });
    })
}

/// Handle to a value captured by a [`storer`] stage.
pub struct StoreHandle<V>(Arc<Mutex<Option<V>>>);

impl<V> Clone for StoreHandle<V> {
    fn clone(&self) -> Self {
        StoreHandle(Arc::clone(&self.0))
    }
}

impl<V> StoreHandle<V> {
    pub fn take(&self) -> Option<V> {
        self.0.lock().expect("store handle lock").take()
    }
}

/// One process that stores a single whole transfer; the value is retrieved
/// from the handle after the run.
pub fn storer<S: PortSpec>(name: impl Into<String>, spec: S) -> (Stage<S, Nil>, StoreHandle<S::Value>) {
    let name = name.into();
    let proc_name = name.clone();
    let slot = StoreHandle(Arc::new(Mutex::new(None)));
    let captured = slot.clone();
    let in_spec = spec.clone();
    let stage = Stage::new(name, spec, Nil, move |net, rx, _tx| {
        net.spawn(&proc_name, move |p| {
            let v = in_spec.store(p, &rx);
            *captured.0.lock().expect("store handle lock") = Some(v);
        });
    });
    (stage, slot)
}

/// Consume and discard one whole transfer (for streams: every element up to
/// and including EOT).
pub fn sink<S: PortSpec>(name: impl Into<String>, spec: S) -> Stage<S, Nil> {
    let name = name.into();
    let proc_name = name.clone();
    let in_spec = spec.clone();
    Stage::new(name, spec, Nil, move |net, rx, _tx| {
        net.spawn(&proc_name, move |p| {
            let _ = in_spec.store(p, &rx);
        });
    })
}

/// Copy one whole transfer from input to output.
pub fn relay<S: PortSpec>(name: impl Into<String>, spec: S) -> Stage<S, S> {
    let spec2 = spec.clone();
    Stage::from_fn(name, spec, spec2, 0, |v| v)
}

/// Element-wise fan-out: every stream element is delivered once on each of
/// the `n` output streams, then EOT on each.
pub fn broadcast_stream<S>(
    name: impl Into<String>,
    inner: S,
    n: usize,
) -> Stage<StreamOf<S>, VectorOf<StreamOf<S>>>
where
    S: PortSpec,
    S::Value: Clone,
{
    assert!(n >= 1, "broadcast needs at least one output");
    let name = name.into();
    let proc_name = name.clone();
    let in_spec = StreamOf::new(inner.clone());
    let out_spec = VectorOf::new(n, StreamOf::new(inner));
    Stage::new(
        name,
        in_spec.clone(),
        out_spec.clone(),
        move |net, rx, tx| {
            net.spawn(&proc_name, move |p| {
                let lane = &out_spec.1;
                while let Some(v) = in_spec.next(p, &rx) {
                    for lane_tx in &tx {
                        lane.send_elem(p, lane_tx, v.clone());
                    }
                }
                for lane_tx in &tx {
                    lane.send_eot(p, lane_tx);
                }
            });
        },
    )
}

/// Round-robin split: element `i` of the input stream goes to output lane
/// `i % n`; every lane is terminated with its own EOT.
pub fn deal<S>(
    name: impl Into<String>,
    inner: S,
    n: usize,
) -> Stage<StreamOf<S>, VectorOf<StreamOf<S>>>
where
    S: PortSpec,
{
    assert!(n >= 1, "deal needs at least one output");
    let name = name.into();
    let proc_name = name.clone();
    let in_spec = StreamOf::new(inner.clone());
    let out_spec = VectorOf::new(n, StreamOf::new(inner));
    Stage::new(
        name,
        in_spec.clone(),
        out_spec.clone(),
        move |net, rx, tx| {
            net.spawn(&proc_name, move |p| {
                let lane = &out_spec.1;
                let mut i = 0usize;
                while let Some(v) = in_spec.next(p, &rx) {
                    lane.send_elem(p, &tx[i % n], v);
                    i += 1;
                }
                for lane_tx in &tx {
                    lane.send_eot(p, lane_tx);
                }
            });
        },
    )
}

/// Round-robin merge, the inverse of [`deal`]: takes one element from each
/// live lane in lane order until every lane has signalled EOT. Restores the
/// order produced by a matching `deal`.
pub fn collect_rr<S>(
    name: impl Into<String>,
    inner: S,
    n: usize,
) -> Stage<VectorOf<StreamOf<S>>, StreamOf<S>>
where
    S: PortSpec,
{
    assert!(n >= 1, "collect needs at least one input");
    let name = name.into();
    let proc_name = name.clone();
    let in_spec = VectorOf::new(n, StreamOf::new(inner.clone()));
    let out_spec = StreamOf::new(inner);
    Stage::new(
        name,
        in_spec.clone(),
        out_spec.clone(),
        move |net, rx, tx| {
            net.spawn(&proc_name, move |p| {
                let lane = &in_spec.1;
                let mut alive = vec![true; n];
                let mut remaining = n;
                while remaining > 0 {
                    for (j, lane_rx) in rx.iter().enumerate() {
                        if !alive[j] {
                            continue;
                        }
                        match lane.next(p, lane_rx) {
                            Some(v) => out_spec.send_elem(p, &tx, v),
                            None => {
                                alive[j] = false;
                                remaining -= 1;
                            }
                        }
                    }
                }
                out_spec.send_eot(p, &tx);
            });
        },
    )
}
