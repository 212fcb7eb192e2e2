//! Channel runtime and schedulers.
//!
//! All channel state lives behind one lock, which makes three things cheap:
//! rendezvous pairing, quiescence-based deadlock detection, and logical-time
//! bookkeeping. A network can run in two modes:
//!
//! * [`RunMode::Parallel`] — every process on its own free-running thread.
//! * [`RunMode::Stepped`] — cooperative stepping: exactly one process
//!   executes at a time and the scheduler picks the next runnable one with a
//!   seeded RNG. Data outputs and cycle counts are identical for every seed,
//!   which the test suites assert.
//!
//! Logical time: each process carries a clock. A rendezvous completes at
//! `max(sender clock, receiver clock) + cycles_per_rendezvous` and sets both
//! clocks to that instant. A buffered (capacity-1) channel decouples the two
//! sides: the sender deposits and moves on, the receiver's clock is lower
//! bounded by the deposit time. `Proc::work` models local computation.

use std::any::Any;
use std::collections::BTreeSet;
use std::marker::PhantomData;
use std::panic::{self, AssertUnwindSafe};
use std::sync::{Arc, Condvar, Mutex, MutexGuard, Once, PoisonError};
use std::thread;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::cost::CostModel;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ChanId(pub(crate) usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProcId(pub(crate) usize);

/// Channel buffering discipline.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Capacity {
    /// Blocking rendezvous: sender and receiver synchronize on each message.
    #[default]
    Rendezvous,
    /// One-deep buffer, modelling a pipeline register between stages.
    Buffered,
}

#[derive(Clone, Copy, Debug)]
pub enum RunMode {
    Parallel,
    Stepped { seed: u64 },
}

/// Sending endpoint of a channel. Deliberately not `Clone`: once a network
/// runs, each endpoint is owned by exactly one process.
pub struct Sender<T> {
    id: ChanId,
    _marker: PhantomData<fn(T)>,
}

/// Receiving endpoint of a channel.
pub struct Receiver<T> {
    id: ChanId,
    _marker: PhantomData<fn() -> T>,
}

impl<T> Sender<T> {
    pub fn id(&self) -> ChanId {
        self.id
    }
}

impl<T> Receiver<T> {
    pub fn id(&self) -> ChanId {
        self.id
    }
}

#[derive(Clone, Debug)]
enum BlockReason {
    Send(ChanId),
    SendFull(ChanId),
    Recv(ChanId),
    Select(Vec<ChanId>),
}

struct ChanState {
    name: String,
    capacity: Capacity,
    /// Value in flight (rendezvous offer) or buffered.
    slot: Option<Box<dyn Any + Send>>,
    /// Sender's clock when the slot value was deposited.
    slot_ready: u64,
    /// Rendezvous sender blocked until its offer is taken, or a buffered
    /// sender blocked on a full slot.
    sender_waiting: Option<ProcId>,
    recv_waiter: Option<ProcId>,
    select_waiters: Vec<ProcId>,
    /// When a buffered slot was last emptied.
    last_take: u64,
    messages: u64,
    /// Streams this channel carries elements for.
    elem_of: Vec<usize>,
    /// Stream this channel carries the EOT signal for.
    eot_of: Option<usize>,
}

struct ProcState {
    name: String,
    clock: u64,
    busy: Vec<(u64, u64)>,
    blocked: Option<BlockReason>,
    alive: bool,
    /// Parked threads wait on their own condvar; wakers notify exactly the
    /// process whose predicate changed.
    cv: Arc<Condvar>,
}

#[derive(Default)]
struct StreamState {
    eot_count: u64,
    saw_elem: bool,
}

struct Stepped {
    current: Option<ProcId>,
    ready: BTreeSet<ProcId>,
    rng: StdRng,
}

struct State {
    chans: Vec<ChanState>,
    procs: Vec<ProcState>,
    streams: Vec<StreamState>,
    violations: Vec<String>,
    blocked_count: usize,
    live_count: usize,
    done_count: usize,
    deadlocked: bool,
    aborted: bool,
    panic: Option<(String, String)>,
    stuck: Vec<String>,
    stepped: Option<Stepped>,
}

struct Core {
    state: Mutex<State>,
    /// Run-completion signal for the orchestrating thread.
    cv: Condvar,
    cost: CostModel,
}

impl Core {
    fn lock(&self) -> MutexGuard<'_, State> {
        self.state.lock().unwrap_or_else(PoisonError::into_inner)
    }

    fn wait<'a>(&self, guard: MutexGuard<'a, State>) -> MutexGuard<'a, State> {
        self.cv.wait(guard).unwrap_or_else(PoisonError::into_inner)
    }

    fn wait_on<'a>(&self, cv: &Condvar, guard: MutexGuard<'a, State>) -> MutexGuard<'a, State> {
        cv.wait(guard).unwrap_or_else(PoisonError::into_inner)
    }
}

/// Payload used to unwind process threads once a run is doomed.
struct Cancel;

fn install_quiet_cancel_hook() {
    static HOOK: Once = Once::new();
    HOOK.call_once(|| {
        let prev = panic::take_hook();
        panic::set_hook(Box::new(move |info| {
            if info.payload().downcast_ref::<Cancel>().is_none() {
                prev(info);
            }
        }));
    });
}

impl State {
    fn describe_block(&self, reason: &BlockReason) -> String {
        match reason {
            BlockReason::Send(c) => format!("sending on '{}'", self.chans[c.0].name),
            BlockReason::SendFull(c) => {
                format!("sending on full buffered '{}'", self.chans[c.0].name)
            }
            BlockReason::Recv(c) => format!("receiving on '{}'", self.chans[c.0].name),
            BlockReason::Select(cs) => {
                let names: Vec<&str> = cs.iter().map(|c| self.chans[c.0].name.as_str()).collect();
                format!("selecting on [{}]", names.join(", "))
            }
        }
    }

    fn wake(&mut self, pid: ProcId) {
        if self.procs[pid.0].blocked.take().is_some() {
            self.blocked_count -= 1;
            match self.stepped.as_mut() {
                Some(st) => {
                    st.ready.insert(pid);
                }
                None => self.procs[pid.0].cv.notify_all(),
            }
        }
    }

    fn pick_next(&mut self) {
        if let Some(st) = self.stepped.as_mut() {
            if st.current.is_none() && !st.ready.is_empty() {
                let idx = st.rng.gen_range(0..st.ready.len());
                let pid = *st.ready.iter().nth(idx).expect("ready entry");
                st.ready.remove(&pid);
                st.current = Some(pid);
                self.procs[pid.0].cv.notify_all();
            }
        }
    }

    fn check_quiescence(&mut self) {
        if !self.deadlocked && self.live_count > 0 && self.blocked_count == self.live_count {
            let mut stuck = Vec::new();
            for p in &self.procs {
                if let Some(reason) = &p.blocked {
                    stuck.push(format!("'{}' {}", p.name, self.describe_block(reason)));
                }
            }
            self.stuck = stuck;
            self.deadlocked = true;
            self.notify_everyone();
        }
    }

    fn notify_everyone(&self) {
        for p in &self.procs {
            p.cv.notify_all();
        }
    }

    /// Instrumentation applied once per deposited message.
    fn note_message(&mut self, chan: usize) {
        self.chans[chan].messages += 1;
        let elem_of = std::mem::take(&mut self.chans[chan].elem_of);
        for &s in &elem_of {
            if self.streams[s].eot_count > 0 {
                self.violations.push(format!(
                    "stream protocol: element on '{}' after EOT",
                    self.chans[chan].name
                ));
            }
            self.streams[s].saw_elem = true;
        }
        self.chans[chan].elem_of = elem_of;
        if let Some(s) = self.chans[chan].eot_of {
            self.streams[s].eot_count += 1;
            if self.streams[s].eot_count > 1 {
                self.violations.push(format!(
                    "stream protocol: duplicate EOT on '{}'",
                    self.chans[chan].name
                ));
            }
        }
    }
}

/// Execution context handed to every process body.
pub struct Proc {
    pid: ProcId,
    core: Arc<Core>,
}

impl Proc {
    fn bail_if_doomed<'a>(&self, st: MutexGuard<'a, State>) -> MutexGuard<'a, State> {
        if st.deadlocked || st.aborted {
            drop(st);
            panic::panic_any(Cancel);
        }
        st
    }

    /// Park until a waker clears our blocked flag (and, in stepped mode,
    /// until the scheduler hands this process the turn).
    fn block_on<'a>(
        &self,
        mut st: MutexGuard<'a, State>,
        reason: BlockReason,
    ) -> MutexGuard<'a, State> {
        let pid = self.pid;
        debug_assert!(st.procs[pid.0].blocked.is_none());
        st.procs[pid.0].blocked = Some(reason);
        st.blocked_count += 1;
        if let Some(stepped) = st.stepped.as_mut() {
            debug_assert_eq!(stepped.current, Some(pid));
            stepped.current = None;
        }
        st.pick_next();
        st.check_quiescence();
        let my_cv = Arc::clone(&st.procs[pid.0].cv);
        loop {
            if st.deadlocked || st.aborted {
                drop(st);
                panic::panic_any(Cancel);
            }
            let runnable = st.procs[pid.0].blocked.is_none();
            let my_turn = match st.stepped.as_ref() {
                Some(stepped) => stepped.current == Some(pid),
                None => true,
            };
            if runnable && my_turn {
                return st;
            }
            st = self.core.wait_on(&my_cv, st);
        }
    }

    fn wake_consumers(&self, st: &mut MutexGuard<'_, State>, id: usize) {
        if let Some(r) = st.chans[id].recv_waiter.take() {
            st.wake(r);
        } else if !st.chans[id].select_waiters.is_empty() {
            let waiters = st.chans[id].select_waiters.clone();
            for w in waiters {
                st.wake(w);
            }
        }
        st.pick_next();
    }

    /// Send one value, blocking per the channel's discipline.
    pub fn send<T: Send + 'static>(&mut self, tx: &Sender<T>, value: T) {
        let id = tx.id.0;
        let c_r = self.core.cost.cycles_per_rendezvous;
        let core = Arc::clone(&self.core);
        let mut st = core.lock();
        st = self.bail_if_doomed(st);
        match st.chans[id].capacity {
            Capacity::Rendezvous => {
                debug_assert!(st.chans[id].slot.is_none(), "second sender on rendezvous");
                let now = st.procs[self.pid.0].clock;
                st.chans[id].slot = Some(Box::new(value));
                st.chans[id].slot_ready = now;
                st.chans[id].sender_waiting = Some(self.pid);
                st.note_message(id);
                self.wake_consumers(&mut st, id);
                // Wait for the take; the receiver computes the rendezvous
                // instant and advances our clock before waking us.
                let _st = self.block_on(st, BlockReason::Send(ChanId(id)));
            }
            Capacity::Buffered => loop {
                if st.chans[id].slot.is_none() {
                    let now = st.procs[self.pid.0].clock;
                    let t = now.max(st.chans[id].last_take) + c_r;
                    st.procs[self.pid.0].clock = t;
                    st.procs[self.pid.0].busy.push((t - c_r, t));
                    st.chans[id].slot = Some(Box::new(value));
                    st.chans[id].slot_ready = t;
                    st.note_message(id);
                    self.wake_consumers(&mut st, id);
                    return;
                }
                st.chans[id].sender_waiting = Some(self.pid);
                st = self.block_on(st, BlockReason::SendFull(ChanId(id)));
            },
        }
    }

    /// Receive one value, blocking until a sender provides one.
    pub fn recv<T: Send + 'static>(&mut self, rx: &Receiver<T>) -> T {
        let id = rx.id.0;
        let c_r = self.core.cost.cycles_per_rendezvous;
        let core = Arc::clone(&self.core);
        let mut st = core.lock();
        loop {
            st = self.bail_if_doomed(st);
            if st.chans[id].slot.is_some() {
                let boxed = match st.chans[id].capacity {
                    Capacity::Rendezvous => {
                        let t = st.chans[id].slot_ready.max(st.procs[self.pid.0].clock) + c_r;
                        st.procs[self.pid.0].clock = t;
                        st.procs[self.pid.0].busy.push((t - c_r, t));
                        let sender = st.chans[id]
                            .sender_waiting
                            .take()
                            .expect("rendezvous offer without sender");
                        st.procs[sender.0].clock = t;
                        st.procs[sender.0].busy.push((t - c_r, t));
                        st.wake(sender);
                        st.pick_next();
                        st.chans[id].slot.take().expect("slot value")
                    }
                    Capacity::Buffered => {
                        let t = st.procs[self.pid.0].clock.max(st.chans[id].slot_ready);
                        st.procs[self.pid.0].clock = t;
                        st.chans[id].last_take = t;
                        let v = st.chans[id].slot.take().expect("slot value");
                        if let Some(sender) = st.chans[id].sender_waiting.take() {
                            st.wake(sender);
                            st.pick_next();
                        }
                        v
                    }
                };
                return *boxed.downcast::<T>().expect("channel type confusion");
            }
            st.chans[id].recv_waiter = Some(self.pid);
            st = self.block_on(st, BlockReason::Recv(ChanId(id)));
        }
    }

    /// Wait until one of `watch` has a value available and return its id,
    /// without consuming. Earlier entries win when several are ready.
    pub fn select(&mut self, watch: &[ChanId]) -> ChanId {
        let core = Arc::clone(&self.core);
        let mut st = core.lock();
        loop {
            st = self.bail_if_doomed(st);
            for &c in watch {
                if st.chans[c.0].slot.is_some() {
                    return c;
                }
            }
            for &c in watch {
                st.chans[c.0].select_waiters.push(self.pid);
            }
            st = self.block_on(st, BlockReason::Select(watch.to_vec()));
            for &c in watch {
                let pid = self.pid;
                st.chans[c.0].select_waiters.retain(|p| *p != pid);
            }
        }
    }

    /// Charge `ops` primitive operations of local computation.
    pub fn work(&mut self, ops: u64) {
        if ops == 0 {
            return;
        }
        let cost = self.core.cost.cycles_per_primitive_op;
        let core = Arc::clone(&self.core);
        let mut st = core.lock();
        st = self.bail_if_doomed(st);
        let t = st.procs[self.pid.0].clock;
        let t2 = t + ops * cost;
        st.procs[self.pid.0].clock = t2;
        if t2 > t {
            st.procs[self.pid.0].busy.push((t, t2));
        }
    }

    /// Current logical clock of this process.
    pub fn clock(&self) -> u64 {
        self.core.lock().procs[self.pid.0].clock
    }
}

struct ChanInit {
    name: String,
    capacity: Capacity,
    elem_of: Vec<usize>,
    eot_of: Option<usize>,
}

type ProcBody = Box<dyn FnOnce(&mut Proc) + Send>;

/// A network under construction: channels, streams, and process bodies.
/// Nothing runs until [`Network::run`].
pub struct Network {
    cost: CostModel,
    default_capacity: Capacity,
    chans: Vec<ChanInit>,
    stream_count: usize,
    procs: Vec<(String, ProcBody)>,
}

impl Default for Network {
    fn default() -> Self {
        Network::new()
    }
}

impl Network {
    pub fn new() -> Self {
        Network::with_cost(CostModel::unit())
    }

    pub fn with_cost(cost: CostModel) -> Self {
        Network {
            cost,
            default_capacity: Capacity::Rendezvous,
            chans: Vec::new(),
            stream_count: 0,
            procs: Vec::new(),
        }
    }

    pub fn set_default_capacity(&mut self, cap: Capacity) {
        self.default_capacity = cap;
    }

    pub fn default_capacity(&self) -> Capacity {
        self.default_capacity
    }

    pub fn channel<T: Send + 'static>(&mut self, name: &str) -> (Sender<T>, Receiver<T>) {
        let cap = self.default_capacity;
        self.channel_with(name, cap)
    }

    pub fn channel_with<T: Send + 'static>(
        &mut self,
        name: &str,
        capacity: Capacity,
    ) -> (Sender<T>, Receiver<T>) {
        let id = ChanId(self.chans.len());
        self.chans.push(ChanInit {
            name: name.to_string(),
            capacity,
            elem_of: Vec::new(),
            eot_of: None,
        });
        (
            Sender {
                id,
                _marker: PhantomData,
            },
            Receiver {
                id,
                _marker: PhantomData,
            },
        )
    }

    /// Register a stream scope for protocol instrumentation: `elems` are the
    /// leaf channels carrying element traffic, `eot` the termination signal.
    pub fn register_stream(&mut self, elems: &[ChanId], eot: ChanId) {
        let sid = self.stream_count;
        self.stream_count += 1;
        for c in elems {
            self.chans[c.0].elem_of.push(sid);
        }
        self.chans[eot.0].eot_of = Some(sid);
    }

    pub fn spawn(&mut self, name: &str, body: impl FnOnce(&mut Proc) + Send + 'static) {
        self.procs.push((name.to_string(), Box::new(body)));
    }

    pub fn process_count(&self) -> usize {
        self.procs.len()
    }

    pub fn channel_count(&self) -> usize {
        self.chans.len()
    }

    /// Run the network to completion.
    pub fn run(self, mode: RunMode) -> Result<RunStats, RunError> {
        install_quiet_cancel_hook();
        let n = self.procs.len();
        let stepped = match mode {
            RunMode::Parallel => None,
            RunMode::Stepped { seed } => Some(Stepped {
                current: None,
                ready: (0..n).map(ProcId).collect(),
                rng: StdRng::seed_from_u64(seed),
            }),
        };
        let state = State {
            chans: self
                .chans
                .into_iter()
                .map(|c| ChanState {
                    name: c.name,
                    capacity: c.capacity,
                    slot: None,
                    slot_ready: 0,
                    sender_waiting: None,
                    recv_waiter: None,
                    select_waiters: Vec::new(),
                    last_take: 0,
                    messages: 0,
                    elem_of: c.elem_of,
                    eot_of: c.eot_of,
                })
                .collect(),
            procs: self
                .procs
                .iter()
                .map(|(name, _)| ProcState {
                    name: name.clone(),
                    clock: 0,
                    busy: Vec::new(),
                    blocked: None,
                    alive: true,
                    cv: Arc::new(Condvar::new()),
                })
                .collect(),
            streams: (0..self.stream_count)
                .map(|_| StreamState::default())
                .collect(),
            violations: Vec::new(),
            blocked_count: 0,
            live_count: n,
            done_count: 0,
            deadlocked: false,
            aborted: false,
            panic: None,
            stuck: Vec::new(),
            stepped,
        };
        let core = Arc::new(Core {
            state: Mutex::new(state),
            cv: Condvar::new(),
            cost: self.cost,
        });

        let mut handles = Vec::with_capacity(n);
        for (i, (name, body)) in self.procs.into_iter().enumerate() {
            let core = Arc::clone(&core);
            let handle = thread::Builder::new()
                .name(name.clone())
                .spawn(move || run_proc(core, ProcId(i), name, body))
                .expect("spawn process thread");
            handles.push(handle);
        }

        {
            let mut st = core.lock();
            st.pick_next();
            while !(st.done_count == n || st.deadlocked || st.aborted) {
                st = core.wait(st);
            }
        }
        for h in handles {
            let _ = h.join();
        }

        let st = core.lock();
        if let Some((name, message)) = st.panic.clone() {
            return Err(RunError::ProcessPanicked { name, message });
        }
        if st.deadlocked {
            return Err(RunError::Deadlock {
                stuck: st.stuck.clone(),
                violations: st.violations.clone(),
            });
        }
        Ok(RunStats {
            process_count: st.procs.len(),
            channel_count: st.chans.len(),
            procs: st
                .procs
                .iter()
                .map(|p| ProcSummary {
                    name: p.name.clone(),
                    clock: p.clock,
                    busy: merge_intervals(&p.busy),
                })
                .collect(),
            chans: st
                .chans
                .iter()
                .map(|c| ChanSummary {
                    name: c.name.clone(),
                    messages: c.messages,
                })
                .collect(),
            streams: st
                .streams
                .iter()
                .map(|s| StreamSummary {
                    eot_count: s.eot_count,
                    saw_elem: s.saw_elem,
                })
                .collect(),
            violations: st.violations.clone(),
        })
    }
}

fn run_proc(core: Arc<Core>, pid: ProcId, name: String, body: ProcBody) {
    {
        // Wait for the first turn in stepped mode.
        let mut st = core.lock();
        let my_cv = Arc::clone(&st.procs[pid.0].cv);
        loop {
            if st.deadlocked || st.aborted {
                finish_proc(&core, &mut st, pid);
                return;
            }
            let my_turn = match st.stepped.as_ref() {
                Some(stepped) => stepped.current == Some(pid),
                None => true,
            };
            if my_turn {
                break;
            }
            st = core.wait_on(&my_cv, st);
        }
    }
    let mut proc = Proc {
        pid,
        core: Arc::clone(&core),
    };
    let result = panic::catch_unwind(AssertUnwindSafe(|| body(&mut proc)));
    let mut st = core.lock();
    if let Err(payload) = result {
        if payload.downcast_ref::<Cancel>().is_none() {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "opaque panic payload".to_string());
            if st.panic.is_none() {
                st.panic = Some((name, message));
            }
            st.aborted = true;
        }
    }
    finish_proc(&core, &mut st, pid);
}

fn finish_proc(core: &Core, st: &mut MutexGuard<'_, State>, pid: ProcId) {
    if st.procs[pid.0].alive {
        st.procs[pid.0].alive = false;
        st.live_count -= 1;
        st.done_count += 1;
        if let Some(stepped) = st.stepped.as_mut() {
            if stepped.current == Some(pid) {
                stepped.current = None;
            }
            stepped.ready.remove(&pid);
        }
        st.pick_next();
        st.check_quiescence();
    }
    core.cv.notify_all();
}

fn merge_intervals(intervals: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(intervals.len());
    for &(a, b) in intervals {
        if let Some(last) = out.last_mut() {
            if a <= last.1 {
                last.1 = last.1.max(b);
                continue;
            }
        }
        out.push((a, b));
    }
    out
}

#[derive(Clone, Debug)]
pub struct ProcSummary {
    pub name: String,
    pub clock: u64,
    /// Half-open busy spans `(start, end]` in logical cycles, merged.
    pub busy: Vec<(u64, u64)>,
}

#[derive(Clone, Debug)]
pub struct ChanSummary {
    pub name: String,
    pub messages: u64,
}

#[derive(Clone, Debug)]
pub struct StreamSummary {
    pub eot_count: u64,
    pub saw_elem: bool,
}

/// Everything observed during a completed run.
#[derive(Clone, Debug)]
pub struct RunStats {
    pub process_count: usize,
    pub channel_count: usize,
    pub procs: Vec<ProcSummary>,
    pub chans: Vec<ChanSummary>,
    pub streams: Vec<StreamSummary>,
    pub violations: Vec<String>,
}

impl RunStats {
    /// Largest process clock at termination.
    pub fn total_cycles(&self) -> u64 {
        self.procs.iter().map(|p| p.clock).max().unwrap_or(0)
    }

    pub fn max_concurrent_active(&self) -> usize {
        self.max_concurrent_matching(|_| true)
    }

    /// Peak number of processes (whose name satisfies `pred`) with
    /// overlapping busy spans.
    pub fn max_concurrent_matching(&self, pred: impl Fn(&str) -> bool) -> usize {
        let mut events: Vec<(u64, i64)> = Vec::new();
        for p in &self.procs {
            if !pred(&p.name) {
                continue;
            }
            for &(a, b) in &p.busy {
                if b > a {
                    events.push((a, 1));
                    events.push((b, -1));
                }
            }
        }
        events.sort_by_key(|&(t, d)| (t, d));
        let mut depth = 0i64;
        let mut max = 0i64;
        for (_, d) in events {
            depth += d;
            max = max.max(depth);
        }
        max as usize
    }

    pub fn count_procs_matching(&self, pred: impl Fn(&str) -> bool) -> usize {
        self.procs.iter().filter(|p| pred(&p.name)).count()
    }

    pub fn messages_total(&self) -> u64 {
        self.chans.iter().map(|c| c.messages).sum()
    }

    /// True when every stream that carried traffic terminated with exactly
    /// one EOT and no protocol violation was recorded.
    pub fn stream_protocol_ok(&self) -> bool {
        self.violations.is_empty()
            && self
                .streams
                .iter()
                .all(|s| s.eot_count == 1 || (s.eot_count == 0 && !s.saw_elem))
    }
}

#[derive(Error, Debug, Clone)]
pub enum RunError {
    #[error("deadlock: no runnable process; stuck: {}", stuck.join("; "))]
    Deadlock {
        stuck: Vec<String>,
        /// Stream-protocol violations observed before the run got stuck.
        violations: Vec<String>,
    },
    #[error("process '{name}' panicked: {message}")]
    ProcessPanicked { name: String, message: String },
}
