from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import datetime
from enum import Enum, auto
from typing import Any, Dict, List


class CheckEventType(Enum):
    """Enumeration of the events a verification suite publishes."""
    SUITE_STARTED = auto()
    CHECK_PASSED = auto()
    CHECK_FAILED = auto()
    SUITE_FINISHED = auto()


@dataclass
class CheckEvent:
    """Data class representing one outcome inside a suite run."""
    event_type: CheckEventType
    source: str
    timestamp: datetime = None
    data: Dict[str, Any] = None

    def __post_init__(self):
        if self.timestamp is None:
            self.timestamp = datetime.now()
        if self.data is None:
            self.data = {}


class CheckSubscriber(ABC):
    """
    Abstract Observer interface for the Observer pattern.

    Objects implementing this interface receive suite events.
    """

    @abstractmethod
    def update(self, event: CheckEvent) -> None:
        pass

    @abstractmethod
    def get_subscribed_event_types(self) -> List[CheckEventType]:
        pass


class CheckPublisher(ABC):
    """
    Abstract Subject interface for the Observer pattern.

    Objects implementing this interface publish suite events to subscribers.
    """

    @abstractmethod
    def subscribe(self, subscriber: CheckSubscriber) -> None:
        pass

    @abstractmethod
    def unsubscribe(self, subscriber: CheckSubscriber) -> None:
        pass

    @abstractmethod
    def notify(self, event: CheckEvent) -> None:
        pass
