"""Thread pool that evaluates sweep instances and keeps their order."""

import queue
import threading
from typing import Any, Callable, Dict, Iterable, List, Optional

from src import config
from src.config import get_thread_count, logger, _

_SHUTDOWN = object()


class SweepWorkerPool:
    """
    Applies one handler to many payloads on named daemon threads.

    A payload whose handler raises is logged and leaves None in its slot;
    the count of such payloads is reported as ``failed``.
    """

    def __init__(self, handler_func: Callable[[Any], Any], num_workers: Optional[int] = None):
        """
        Args:
            handler_func: The function applied to each payload
            num_workers: Number of worker threads (default: DIVSMOOTH_THREADS
                or the machine's parallelism)
        """
        self.handler_func = handler_func
        self.num_workers = max(1, num_workers or get_thread_count())
        self.tasks: "queue.Queue[Any]" = queue.Queue()
        self.results: Dict[int, Any] = {}
        self.failed = 0
        self.lock = threading.Lock()
        self.workers = [
            threading.Thread(target=self._worker, name=f"SweepWorker-{i + 1}", daemon=True)
            for i in range(self.num_workers)
        ]
        for worker in self.workers:
            worker.start()
        logger.info(_("Started {} sweep workers").format(self.num_workers))

    def _worker(self):
        while True:
            task = self.tasks.get()
            try:
                if task is _SHUTDOWN:
                    return
                index, payload = task
                # interrupted sweeps drain the queue without evaluating
                if config.stop_event.is_set():
                    continue
                try:
                    result = self.handler_func(payload)
                except Exception as e:
                    logger.error(_("Sweep task {} failed: {}").format(index, e))
                    with self.lock:
                        self.failed += 1
                    continue
                with self.lock:
                    self.results[index] = result
            finally:
                self.tasks.task_done()

    def map(self, payloads: Iterable[Any]) -> List[Any]:
        """Run the handler on every payload and return results in input order."""
        with self.lock:
            self.results = {}
        count = 0
        for count, payload in enumerate(payloads, start=1):
            self.tasks.put((count - 1, payload))
        self.tasks.join()
        with self.lock:
            return [self.results.get(i) for i in range(count)]

    def stop(self):
        """Let the workers finish the queue, then join them."""
        for _i in range(len(self.workers)):
            self.tasks.put(_SHUTDOWN)
        for worker in self.workers:
            worker.join(timeout=5)
        logger.info(_("Sweep worker pool stopped"))

    def get_stats(self) -> dict:
        with self.lock:
            return {
                "queue_size": self.tasks.qsize(),
                "completed": len(self.results),
                "failed": self.failed,
                "workers_count": len(self.workers),
            }

    def __enter__(self) -> "SweepWorkerPool":
        return self

    def __exit__(self, *exc):
        self.stop()
