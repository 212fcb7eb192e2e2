//! Higher-order process refinements of map, zipWith and fold.
//!
//! Each skeleton assembles a network whose observable behaviour equals the
//! corresponding sequential higher-order function applied to the same
//! inputs; the test suite checks that equality against independent oracles.

use crate::port::{PairOf, PortSpec, StreamOf, VectorOf};
use crate::process::Stage;
use crate::shape::ShapeError;

/// The port pair of a stream zip: two input streams, one output stream.
pub type StreamZipStage<A, B, O> = Stage<PairOf<StreamOf<A>, StreamOf<B>>, StreamOf<O>>;

/// The port pair of a pipelined fold: per-stage argument vector plus an
/// accumulator stream in, an accumulator stream out.
pub type PipelinedFoldStage<A, V> = Stage<PairOf<VectorOf<A>, StreamOf<V>>, StreamOf<V>>;

/// The port pair of a vector zip: two input vectors, one output vector.
pub type VectorZipStage<A, B, O> = Stage<PairOf<VectorOf<A>, VectorOf<B>>, VectorOf<O>>;

/// Stream map: one looping process applying `f` to every element and
/// forwarding EOT after the last one.
pub fn smap<I, O, F>(
    name: impl Into<String>,
    input: I,
    output: O,
    ops: u64,
    f: F,
) -> Stage<StreamOf<I>, StreamOf<O>>
where
    I: PortSpec,
    O: PortSpec,
    F: Fn(I::Value) -> O::Value + Send + 'static,
{
    let name = name.into();
    let proc_name = name.clone();
    let in_spec = StreamOf::new(input);
    let out_spec = StreamOf::new(output);
    Stage::new(
        name,
        in_spec.clone(),
        out_spec.clone(),
        move |net, rx, tx| {
            net.spawn(&proc_name, move |p| {
                while let Some(v) = in_spec.next(p, &rx) {
                    p.work(ops);
                    out_spec.send_elem(p, &tx, f(v));
                }
                out_spec.send_eot(p, &tx);
            });
        },
    )
}

/// Vector map over per-lane stage templates: `n` concurrent instances, one
/// per lane. Fails if instances disagree on port shapes.
pub fn vmap<I, O>(
    n: usize,
    mut mk: impl FnMut(usize) -> Stage<I, O>,
) -> Result<Stage<VectorOf<I>, VectorOf<O>>, ShapeError>
where
    I: PortSpec,
    O: PortSpec,
{
    vmapwith((0..n).map(&mut mk).collect())
}

/// Vector map with one distinct stage per lane.
pub fn vmapwith<I, O>(stages: Vec<Stage<I, O>>) -> Result<Stage<VectorOf<I>, VectorOf<O>>, ShapeError>
where
    I: PortSpec,
    O: PortSpec,
{
    let n = stages.len();
    if n == 0 {
        return Err(ShapeError::Arity {
            what: "vmapwith stage list",
            expected: 1,
            got: 0,
        });
    }
    let in_shape = stages[0].input_shape();
    let out_shape = stages[0].output_shape();
    for s in &stages[1..] {
        if s.input_shape() != in_shape || s.output_shape() != out_shape {
            return Err(ShapeError::Invalid(format!(
                "vmapwith stages disagree on shapes: '{}' is {} -> {}, expected {} -> {}",
                s.name(),
                s.input_shape(),
                s.output_shape(),
                in_shape,
                out_shape,
            )));
        }
    }
    let input = VectorOf::new(n, stages[0].input_spec().clone());
    let output = VectorOf::new(n, stages[0].output_spec().clone());
    let name = format!("vmap{}({})", n, stages[0].name());
    Ok(Stage::new(name, input, output, move |net, rx, tx| {
        for ((stage, lane_rx), lane_tx) in stages.into_iter().zip(rx).zip(tx) {
            stage.instantiate(net, lane_rx, lane_tx);
        }
    }))
}

/// Stream zip: one looping process combining elements pairwise. Both input
/// EOTs are consumed and a single EOT is forwarded. If one stream is longer,
/// the surplus is never consumed and the network fails to terminate, which
/// the deadlock detector reports.
pub fn szipwith<A, B, O, F>(
    name: impl Into<String>,
    a: A,
    b: B,
    output: O,
    ops: u64,
    f: F,
) -> StreamZipStage<A, B, O>
where
    A: PortSpec,
    B: PortSpec,
    O: PortSpec,
    F: Fn(A::Value, B::Value) -> O::Value + Send + 'static,
{
    let name = name.into();
    let proc_name = name.clone();
    let a_spec = StreamOf::new(a);
    let b_spec = StreamOf::new(b);
    let out_spec = StreamOf::new(output);
    let input = PairOf(a_spec.clone(), b_spec.clone());
    Stage::new(name, input, out_spec.clone(), move |net, rx, tx| {
        let (arx, brx) = rx;
        net.spawn(&proc_name, move |p| {
            loop {
                match a_spec.next(p, &arx) {
                    Some(va) => {
                        // The matching element must follow on the second
                        // stream; equal lengths are the caller's contract.
                        let vb = b_spec.0.store(p, &brx.elems);
                        p.work(ops);
                        out_spec.send_elem(p, &tx, f(va, vb));
                    }
                    None => {
                        let _ = p.recv(&brx.eot);
                        out_spec.send_eot(p, &tx);
                        return;
                    }
                }
            }
        });
    })
}

/// Vector zip over per-lane stage templates: lane `i` combines element `i`
/// of both input vectors.
pub fn vzipwith<A, B, O>(
    n: usize,
    mut mk: impl FnMut(usize) -> Stage<PairOf<A, B>, O>,
) -> Result<VectorZipStage<A, B, O>, ShapeError>
where
    A: PortSpec,
    B: PortSpec,
    O: PortSpec,
{
    if n == 0 {
        return Err(ShapeError::Arity {
            what: "vzipwith lane count",
            expected: 1,
            got: 0,
        });
    }
    let stages: Vec<Stage<PairOf<A, B>, O>> = (0..n).map(&mut mk).collect();
    let in_shape = stages[0].input_shape();
    let out_shape = stages[0].output_shape();
    for s in &stages[1..] {
        if s.input_shape() != in_shape || s.output_shape() != out_shape {
            return Err(ShapeError::Invalid(format!(
                "vzipwith lanes disagree on shapes: '{}' is {} -> {}",
                s.name(),
                s.input_shape(),
                s.output_shape(),
            )));
        }
    }
    let a_spec = stages[0].input_spec().0.clone();
    let b_spec = stages[0].input_spec().1.clone();
    let out_inner = stages[0].output_spec().clone();
    let input = PairOf(VectorOf::new(n, a_spec), VectorOf::new(n, b_spec));
    let output = VectorOf::new(n, out_inner);
    let name = format!("vzip{}({})", n, stages[0].name());
    Ok(Stage::new(name, input, output, move |net, rx, tx| {
        let (arx, brx) = rx;
        for (((stage, a), b), lane_tx) in stages.into_iter().zip(arx).zip(brx).zip(tx) {
            stage.instantiate(net, (a, b), lane_tx);
        }
    }))
}

/// Pipelined left fold: `k` stages in a line, stage `i` holding its own
/// argument bundle (received once) and transforming every accumulator that
/// streams past. Several in-flight accumulators occupy different stages at
/// the same time, which is what makes the pipeline overlap.
pub fn vvfoldl<A, V, F>(
    k: usize,
    arg: A,
    acc: V,
    name: impl Into<String>,
    ops: u64,
    f: F,
) -> Result<PipelinedFoldStage<A, V>, ShapeError>
where
    A: PortSpec,
    V: PortSpec,
    F: Fn(usize, V::Value, &A::Value) -> V::Value + Send + Sync + Clone + 'static,
{
    if k == 0 {
        return Err(ShapeError::Arity {
            what: "vvfoldl stage count",
            expected: 1,
            got: 0,
        });
    }
    let name = name.into();
    let args_spec = VectorOf::new(k, arg.clone());
    let acc_spec = StreamOf::new(acc.clone());
    let input = PairOf(args_spec, acc_spec.clone());
    let output = acc_spec.clone();
    let stage_base = name.clone();
    Ok(Stage::new(name, input, output, move |net, rx, tx| {
        let (args_rx, acc_rx) = rx;
        let mut inbound = Some(acc_rx);
        let mut final_tx = Some(tx);
        let mut lanes = args_rx.into_iter().enumerate().peekable();
        while let Some((i, arg_rx)) = lanes.next() {
            let is_last = lanes.peek().is_none();
            let stage_in = inbound.take().expect("fold chain input");
            // Only the last stage keeps the real output port.
            let out_tx = if is_last {
                final_tx.take().expect("fold chain output")
            } else {
                let (mtx, mrx) = acc_spec
                    .clone()
                    .open(net, &format!("{stage_base}.mid[{i}]"));
                inbound = Some(mrx);
                mtx
            };
            let f = f.clone();
            let arg_spec = arg.clone();
            let acc_spec = acc_spec.clone();
            let proc_name = format!("{stage_base}[{i}]");
            net.spawn(&proc_name, move |p| {
                let my_arg = arg_spec.store(p, &arg_rx);
                while let Some(v) = acc_spec.next(p, &stage_in) {
                    p.work(ops);
                    acc_spec.send_elem(p, &out_tx, f(i, v, &my_arg));
                }
                acc_spec.send_eot(p, &out_tx);
            });
        }
    }))
}

/// Streamed left fold: a single process folds the argument stream into one
/// accumulator and emits the result.
pub fn svfoldl<A, V, F>(
    name: impl Into<String>,
    arg: A,
    acc: V,
    ops: u64,
    f: F,
) -> Stage<PairOf<V, StreamOf<A>>, V>
where
    A: PortSpec,
    V: PortSpec,
    F: Fn(usize, V::Value, A::Value) -> V::Value + Send + 'static,
{
    let name = name.into();
    let proc_name = name.clone();
    let arg_spec = StreamOf::new(arg);
    let acc_spec = acc.clone();
    let input = PairOf(acc.clone(), arg_spec.clone());
    Stage::new(name, input, acc, move |net, rx, tx| {
        let (init_rx, args_rx) = rx;
        net.spawn(&proc_name, move |p| {
            let mut v = acc_spec.store(p, &init_rx);
            let mut i = 0usize;
            while let Some(a) = arg_spec.next(p, &args_rx) {
                p.work(ops);
                v = f(i, v, a);
                i += 1;
            }
            acc_spec.produce(p, &tx, v);
        });
    })
}

/// Streamed fold over a stream of accumulators: the argument stream is
/// consumed once and retained, then every accumulator element is folded
/// through the whole retained sequence. One process regardless of the
/// number of fold steps.
pub fn svfoldl_stream<A, V, F>(
    name: impl Into<String>,
    arg: A,
    acc: V,
    ops: u64,
    f: F,
) -> Stage<PairOf<StreamOf<A>, StreamOf<V>>, StreamOf<V>>
where
    A: PortSpec,
    V: PortSpec,
    F: Fn(usize, V::Value, &A::Value) -> V::Value + Send + 'static,
{
    let name = name.into();
    let proc_name = name.clone();
    let arg_spec = StreamOf::new(arg);
    let acc_spec = StreamOf::new(acc);
    let input = PairOf(arg_spec.clone(), acc_spec.clone());
    Stage::new(name, input, acc_spec.clone(), move |net, rx, tx| {
        let (args_rx, acc_rx) = rx;
        net.spawn(&proc_name, move |p| {
            let args = arg_spec.store(p, &args_rx);
            while let Some(mut v) = acc_spec.next(p, &acc_rx) {
                for (i, a) in args.iter().enumerate() {
                    p.work(ops);
                    v = f(i, v, a);
                }
                acc_spec.send_elem(p, &tx, v);
            }
            acc_spec.send_eot(p, &tx);
        });
    })
}
