import logging
from typing import Dict, List, Set

from src.vage_spaces.interfaces.event import (
    CheckEvent, CheckEventType, CheckPublisher, CheckSubscriber
)

logger = logging.getLogger(__name__)


class EventManager(CheckPublisher):
    """
    Distributes suite events to interested subscribers.

    This class implements the Subject role in the Observer pattern.
    """

    def __init__(self):
        self._subscribers: Dict[CheckEventType, Set[CheckSubscriber]] = {
            event_type: set() for event_type in CheckEventType
        }

    def subscribe(self, subscriber: CheckSubscriber) -> None:
        for event_type in subscriber.get_subscribed_event_types():
            self._subscribers[event_type].add(subscriber)

    def unsubscribe(self, subscriber: CheckSubscriber) -> None:
        for subscribers_set in self._subscribers.values():
            subscribers_set.discard(subscriber)

    def notify(self, event: CheckEvent) -> None:
        for subscriber in self._subscribers.get(event.event_type, set()):
            subscriber.update(event)

    def get_subscriber_count(self) -> Dict[CheckEventType, int]:
        return {event_type: len(subscribers)
                for event_type, subscribers in self._subscribers.items()}


class LoggingCheckSubscriber(CheckSubscriber):
    """
    Keeps a bounded in-memory log of suite events and forwards them to ``logging``.

    This is a concrete Observer in the Observer pattern.
    """

    def __init__(self, event_types: List[CheckEventType] = None, max_log_size: int = 1000):
        self._event_types = event_types or list(CheckEventType)
        self._max_log_size = max_log_size
        self._event_log = []

    def update(self, event: CheckEvent) -> None:
        entry = {
            "timestamp": event.timestamp.isoformat() if event.timestamp else None,
            "type": event.event_type.name,
            "source": event.source,
            "data": event.data,
        }
        self._event_log.append(entry)
        if len(self._event_log) > self._max_log_size:
            self._event_log = self._event_log[-self._max_log_size:]

        if event.event_type in (CheckEventType.SUITE_STARTED, CheckEventType.SUITE_FINISHED):
            logger.info("%s %s %s", event.source, event.event_type.name.lower(), event.data)
        elif event.event_type == CheckEventType.CHECK_FAILED:
            logger.warning("%s check failed: %s", event.source, event.data)
        else:
            logger.debug("%s check passed: %s", event.source, event.data)

    def get_subscribed_event_types(self) -> List[CheckEventType]:
        return self._event_types

    def get_log(self) -> List[Dict]:
        return self._event_log.copy()

    def clear_log(self) -> None:
        self._event_log = []


class FailureCollector(CheckSubscriber):
    """Collects the payloads of failed checks so a suite can report them."""

    def __init__(self, limit: int = 20):
        self._limit = limit
        self._failures: List[Dict] = []
        self._count = 0

    def update(self, event: CheckEvent) -> None:
        self._count += 1
        if len(self._failures) < self._limit:
            self._failures.append(dict(event.data, source=event.source))

    def get_subscribed_event_types(self) -> List[CheckEventType]:
        return [CheckEventType.CHECK_FAILED]

    @property
    def count(self) -> int:
        return self._count

    def get_failures(self) -> List[Dict]:
        return self._failures.copy()
