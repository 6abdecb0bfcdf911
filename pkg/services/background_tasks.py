"""
Background Tasks
Runs search jobs on a joblib worker pool with an append-only checkpoint
"""

import logging
import os
from typing import Dict, Iterable, List, Optional, Set, Tuple

from joblib import Parallel, delayed

from services.search_service import (JobFormatError, SearchConfig, SearchJob,
                                     SearchStats, StalePrefixError, run_job)

logger = logging.getLogger(__name__)

HEADER_PREFIX = '#'


def _run_job_worker(cfg: SearchConfig, line: str) -> Tuple[str, List[str], dict]:
    results, stats = run_job(cfg, SearchJob.from_line(line))
    return line, sorted(results), stats.as_dict()


def checkpoint_header(cfg: SearchConfig) -> str:
    return (f"{HEADER_PREFIX} n={cfg.n} r={cfg.r} primitive_only={int(cfg.primitive_only)} "
            f"count_cap={int(cfg.count_cap)}")


class CheckpointStore:
    """
    Completed jobs for one search configuration

    The first line is a header naming the configuration; every further line
    is a job line, a tab, and the space-separated canonical results.
    """

    def __init__(self, path: str, cfg: SearchConfig, fsync: bool = True):
        self.path = path
        self.header = checkpoint_header(cfg)
        self.fsync = fsync

    def load(self) -> Dict[str, List[str]]:
        done = {}
        if not os.path.exists(self.path) or os.path.getsize(self.path) == 0:
            return done
        with open(self.path, encoding='ascii') as f:
            text = f.read()
        lines = text.split('\n')
        # the last element is '' unless an interrupted write left a partial line
        if lines[-1]:
            logger.warning(f"Dropping partial checkpoint line in {self.path}")
            with open(self.path, 'r+', encoding='ascii') as f:
                f.truncate(len(text) - len(lines[-1]))
        complete = lines[:-1]
        if not complete:
            return done
        if not complete[0].startswith(HEADER_PREFIX):
            raise JobFormatError(f"Checkpoint {self.path} has no configuration header")
        if complete[0] != self.header:
            raise StalePrefixError(f"Checkpoint {self.path} was written for "
                                   f"'{complete[0]}', not '{self.header}'")
        for line in complete[1:]:
            if not line.strip():
                continue
            job_line, sep, payload = line.partition('\t')
            if not sep:
                raise JobFormatError(f"Checkpoint line without results field: {line!r}")
            SearchJob.from_line(job_line)
            done[job_line] = payload.split()
        logger.info(f"Checkpoint {self.path}: {len(done)} completed jobs")
        return done

    def append(self, job_line: str, results: Iterable[str]):
        record = f"{job_line}\t{' '.join(results)}\n"
        if not os.path.exists(self.path) or os.path.getsize(self.path) == 0:
            record = f"{self.header}\n{record}"
        with open(self.path, 'a', encoding='ascii') as f:
            f.write(record)
            f.flush()
            if self.fsync:
                os.fsync(f.fileno())


def run_jobs(cfg: SearchConfig, jobs: Iterable[SearchJob], workers: int = 1,
             checkpoint: Optional[str] = None, fsync: bool = True) -> Tuple[Set[str], SearchStats]:
    """
    Run jobs and merge their results

    Args:
        cfg: Search configuration shared by all jobs
        jobs: Jobs to run
        workers: Worker processes (1 runs in-process)
        checkpoint: Checkpoint path; completed jobs found there are skipped
            and their recorded results reused
        fsync: Sync each checkpoint append to disk

    Returns:
        (results, stats): union of canonical graph6 results, and counters
        for the jobs run in this call only
    """
    lines = [job.to_line() for job in jobs]
    store = CheckpointStore(checkpoint, cfg, fsync) if checkpoint else None
    done = store.load() if store else {}

    results: Set[str] = set()
    for line in lines:
        if line in done:
            results.update(done[line])
    pending = [line for line in lines if line not in done]
    logger.info(f"Running {len(pending)} of {len(lines)} jobs with {workers} workers, "
                f"{len(results)} results restored")

    if workers <= 1:
        outcomes = (_run_job_worker(cfg, line) for line in pending)
    else:
        outcomes = Parallel(n_jobs=workers, return_as='generator')(
            delayed(_run_job_worker)(cfg, line) for line in pending)

    ran: Set[str] = set()
    stats = SearchStats()
    for line, forms, job_stats in outcomes:
        ran.update(forms)
        stats.merge(SearchStats(**job_stats))
        if store:
            store.append(line, forms)

    results |= ran
    stats.duplicates += max(0, stats.outputs - len(ran))
    stats.outputs = len(ran)
    return results, stats
