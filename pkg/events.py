"""Event types and event bus for experiment runs."""

import asyncio
import logging
from dataclasses import dataclass
from enum import Enum, auto
from typing import Any

logger = logging.getLogger(__name__)


class EventType(Enum):
    """Run lifecycle events."""
    RUN_STARTED = auto()
    RUN_COMPLETED = auto()
    RUN_FAILED = auto()
    REPORT_WRITTEN = auto()


@dataclass
class Event:
    """Base event class."""
    type: EventType
    data: dict[str, Any]
    run_id: str | None = None  # None for experiment-wide events


class EventBus:
    """Async event bus decoupling the run pool from progress reporting."""

    def __init__(self) -> None:
        self._queue: asyncio.Queue[Event] = asyncio.Queue()
        self._handlers: dict[EventType, list[Any]] = {}

    def subscribe(self, event_type: EventType, handler: Any) -> None:
        """Subscribe a handler to an event type."""
        if event_type not in self._handlers:
            self._handlers[event_type] = []
        self._handlers[event_type].append(handler)

    async def publish(self, event: Event) -> None:
        """Publish an event to the queue."""
        await self._queue.put(event)

    async def _dispatch(self, event: Event) -> None:
        for handler in self._handlers.get(event.type, []):
            try:
                if asyncio.iscoroutinefunction(handler):
                    await handler(event)
                else:
                    handler(event)
            except Exception as e:
                logger.error("Error in event handler for %s: %s", event.type.name, e)

    async def process(self) -> None:
        """Process events from the queue until cancelled."""
        while True:
            event = await self._queue.get()
            await self._dispatch(event)
            self._queue.task_done()

    async def join(self) -> None:
        """Wait until every published event has been handled by ``process``."""
        await self._queue.join()
