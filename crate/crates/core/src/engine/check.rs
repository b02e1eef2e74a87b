//! The recursive well-connectedness checks.
//!
//! A check takes a connected cluster subgraph, computes its global minimum
//! cut and either accepts the cluster or splits it along the cut. WCC
//! recurses on both sides directly; CM first re-clusters each side with a
//! community detector. Pending pieces live on an explicit stack; pieces of at
//! least [`SPAWN_MIN_VERTICES`] vertices are handed to the rayon scope when
//! one is available.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::cda::{detect_connected, CommunityDetector};
use crate::error::{Error, Result};
use crate::graph::Subgraph;
use crate::mincut::global_min_cut;

use super::RefinementConfig;

/// Children with fewer vertices are processed inline by the current task.
pub const SPAWN_MIN_VERTICES: usize = 1000;

/// Append-only collector of accepted clusters and check counters.
#[derive(Debug, Default)]
pub struct ClusterSink {
    accepted: Mutex<Vec<Vec<usize>>>,
    error: Mutex<Option<Error>>,
    min_cut_calls: AtomicUsize,
    cda_calls: AtomicUsize,
    max_depth: AtomicUsize,
}

impl ClusterSink {
    pub fn new() -> Self {
        Self::default()
    }

    fn accept(&self, vertices: Vec<usize>) {
        self.accepted.lock().unwrap().push(vertices);
    }

    pub(crate) fn fail(&self, err: Error) {
        self.error.lock().unwrap().get_or_insert(err);
    }

    fn failed(&self) -> bool {
        self.error.lock().unwrap().is_some()
    }

    pub fn min_cut_calls(&self) -> usize {
        self.min_cut_calls.load(Ordering::Relaxed)
    }

    pub fn cda_calls(&self) -> usize {
        self.cda_calls.load(Ordering::Relaxed)
    }

    /// Deepest recursion level reached; a top-level cluster is depth 1.
    pub fn max_depth(&self) -> usize {
        self.max_depth.load(Ordering::Relaxed)
    }

    /// Accepted clusters (global IDs, each sorted) ordered by smallest
    /// member, independent of completion order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut clusters = self.accepted.lock().unwrap().clone();
        clusters.sort();
        clusters
    }

    fn take_error(&self) -> Result<()> {
        match self.error.lock().unwrap().take() {
            Some(err) => Err(err),
            None => Ok(()),
        }
    }
}

/// How a failing cluster is split after its min-cut bisection.
#[derive(Clone, Copy)]
pub(crate) enum Splitter<'a> {
    Bisect,
    Modify(&'a dyn CommunityDetector),
}

pub(crate) struct Context<'a> {
    pub cfg: &'a RefinementConfig,
    pub splitter: Splitter<'a>,
    pub sink: &'a ClusterSink,
}

struct Piece {
    sub: Subgraph,
    depth: usize,
}

/// WCC check on one connected cluster subgraph, run on the calling thread.
///
/// Accepted clusters go to `sink` in the parent's vertex IDs.
pub fn wcc_check(sub: &Subgraph, cfg: &RefinementConfig, sink: &ClusterSink) -> Result<()> {
    let ctx = Context {
        cfg,
        splitter: Splitter::Bisect,
        sink,
    };
    process(sub.clone(), 1, &ctx, None);
    sink.take_error()
}

/// CM check on one connected cluster subgraph, run on the calling thread.
pub fn cm_check(
    sub: &Subgraph,
    cfg: &RefinementConfig,
    detector: &dyn CommunityDetector,
    sink: &ClusterSink,
) -> Result<()> {
    let ctx = Context {
        cfg,
        splitter: Splitter::Modify(detector),
        sink,
    };
    process(sub.clone(), 1, &ctx, None);
    sink.take_error()
}

pub(crate) fn finish(sink: &ClusterSink) -> Result<()> {
    sink.take_error()
}

/// Refines `sub` and everything split off from it. With a scope, large
/// pieces become separate tasks; everything else stays on a local stack.
pub(crate) fn process<'s>(
    sub: Subgraph,
    depth: usize,
    ctx: &'s Context<'s>,
    scope: Option<&rayon::Scope<'s>>,
) {
    let mut stack = vec![Piece { sub, depth }];
    while let Some(piece) = stack.pop() {
        if ctx.sink.failed() {
            return;
        }
        let mut emit = |sub: Subgraph| {
            let child = Piece {
                sub,
                depth: piece.depth + 1,
            };
            match scope {
                Some(scope) if child.sub.len() >= SPAWN_MIN_VERTICES => {
                    scope.spawn(move |s| process(child.sub, child.depth, ctx, Some(s)));
                }
                _ => stack.push(child),
            }
        };
        if let Err(err) = check_one(&piece, ctx, &mut emit) {
            ctx.sink.fail(err);
            return;
        }
    }
}

fn check_one(piece: &Piece, ctx: &Context<'_>, emit: &mut dyn FnMut(Subgraph)) -> Result<()> {
    let sink = ctx.sink;
    sink.max_depth.fetch_max(piece.depth, Ordering::Relaxed);
    let sub = &piece.sub;
    if sub.num_edges() == 0 {
        return Ok(());
    }
    let cut = global_min_cut(sub.graph())?;
    sink.min_cut_calls.fetch_add(1, Ordering::Relaxed);
    if ctx.cfg.criterion.accepts(cut.cut_weight, sub.len()) {
        sink.accept(sub.parent_vertex_ids().to_vec());
        return Ok(());
    }
    let s_post = ctx.cfg.s_post;
    for side in [&cut.side_one, &cut.side_two] {
        if side.len() <= s_post {
            continue;
        }
        let part = sub.restrict(side)?;
        match ctx.splitter {
            Splitter::Bisect => emit(part),
            Splitter::Modify(detector) => {
                sink.cda_calls.fetch_add(1, Ordering::Relaxed);
                let communities = detect_connected(detector, &part);
                if communities.len() > 1 {
                    for c in communities.communities() {
                        if c.len() > s_post {
                            emit(part.restrict(c)?);
                        }
                    }
                } else {
                    emit(part);
                }
            }
        }
    }
    Ok(())
}
