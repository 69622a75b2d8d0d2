# cli/display.py

import sys
import time
import threading
from datetime import timedelta
from contextlib import contextmanager
from typing import Any, Dict, List, Optional, TextIO
from tabulate import tabulate
import logging
from colorama import init, Fore, Style

# Initialize colorama
init()


class LiveTimer(threading.Thread):
    """Live timer thread for showing elapsed time"""

    def __init__(self):
        super().__init__()
        self.running = True
        self.start_time = time.time()
        self.current_time = "0:00:00"
        self._lock = threading.Lock()
        self.daemon = True

    def run(self):
        while self.running:
            elapsed = int(time.time() - self.start_time)
            with self._lock:
                self.current_time = str(timedelta(seconds=elapsed))
            time.sleep(0.2)

    def stop(self):
        self.running = False

    def get_time(self) -> str:
        with self._lock:
            return self.current_time


class MultiProgress:
    """Multi-stage progress display, drawn on the error stream"""

    STAGES = {
        'pending': '⋯',
        'working': '⚙',
        'done': '✓',
        'error': '✗',
    }

    def __init__(self, stream: Optional[TextIO] = None):
        self.stream = stream or sys.stderr
        self.timer = LiveTimer()
        self.timer.start()
        self.stages: Dict[str, Dict[str, Any]] = {}
        self.current_stage = None
        self.finished = False

    def add_stage(self, name: str, description: str, status: str = 'pending'):
        """Add a new stage to track"""
        self.stages[name] = {
            'description': description,
            'status': status,
            'progress': None,
            'details': ''
        }

    def update_stage(self, name: str, status: str, progress: int = None, details: str = None):
        """Update stage status, adding unknown stages on the fly"""
        if self.finished:
            return
        if name not in self.stages:
            self.add_stage(name, name.replace('-', ' ').capitalize())

        stage = self.stages[name]
        stage['status'] = status
        if progress is not None:
            stage['progress'] = progress
        if details is not None:
            stage['details'] = details
        self.current_stage = name
        self._draw_line(name)

    def _get_progress_bar(self, progress: int, width: int = 30) -> str:
        """Generate progress bar string"""
        filled = int(width * progress / 100)
        return f"[{Fore.GREEN}{'=' * filled}{Fore.WHITE}{' ' * (width - filled)}]"

    def _format(self, stage: Dict[str, Any]) -> str:
        icon = self.STAGES.get(stage['status'], self.STAGES['pending'])
        color = Fore.GREEN if stage['status'] == 'done' else \
            Fore.YELLOW if stage['status'] == 'working' else \
            Fore.RED if stage['status'] == 'error' else \
            Fore.WHITE

        if stage['status'] == 'working' and stage['progress'] is not None:
            status_str = f"{self._get_progress_bar(stage['progress'])} {stage['progress']}%"
        else:
            status_str = stage['status'].upper()

        line = f"{icon} {color}{stage['description']}{Style.RESET_ALL}: {status_str}"
        if stage['details']:
            line += f" ({stage['details']})"
        return line

    def _draw_line(self, name: str):
        line = self._format(self.stages[name])
        self.stream.write(f"\r\033[K{Fore.CYAN}[{self.timer.get_time()}]{Style.RESET_ALL} {line}")
        if self.stages[name]['status'] != 'working':
            self.stream.write('\n')
        self.stream.flush()

    def finish(self):
        """Finish progress display"""
        if self.finished:
            return

        self.finished = True
        self.timer.stop()
        self.stream.write(f"\r\033[K{Fore.CYAN}⏱ Total Time: {Style.BRIGHT}{self.timer.get_time()}{Style.RESET_ALL}\n")
        self.stream.flush()


class DisplayBase:
    """Base display handler"""

    def __init__(self, stream: Optional[TextIO] = None):
        self.logger = logging.getLogger(__name__)
        self.stream = stream or sys.stderr
        self.progress = None

    def print(self, message: str):
        print(message, file=self.stream)

    def update(self, stage: str, status: str = 'working', progress: int = None, details: str = None):
        if self.progress:
            self.progress.update_stage(stage, status, progress, details)

    def success(self, message: str):
        print(f"{Fore.GREEN}✨ {message}{Style.RESET_ALL}", file=self.stream)

    def warning(self, message: str):
        print(f"{Fore.YELLOW}⚠ {message}{Style.RESET_ALL}", file=self.stream)

    def error(self, message: str):
        print(f"{Fore.RED}✗ {message}{Style.RESET_ALL}", file=self.stream)

    def show_report(self, report: Dict[str, Any]):
        pass

    def finish(self):
        if self.progress:
            self.progress.finish()


def report_rows(report: Dict[str, Any]) -> List[List[str]]:
    """Flatten a report into (field, value) rows, verdict first"""
    rows = []
    for key, value in report.items():
        if isinstance(value, dict):
            value = ', '.join(f"{k}={v}" for k, v in value.items())
        elif isinstance(value, float):
            value = f"{value:.6g}"
        rows.append([key, str(value)])
    return rows


class InteractiveDisplay(DisplayBase):
    """Interactive display handler"""

    def __init__(self, stream: Optional[TextIO] = None):
        super().__init__(stream)
        self.progress = MultiProgress(self.stream)
        self.setup_stages()

    def setup_stages(self):
        """Setup default stages"""
        self.progress.add_stage('setup', 'Preparing Experiment')
        self.progress.add_stage('trials', 'Running Trials')
        self.progress.add_stage('compare', 'Comparing Against Bound')
        self.progress.add_stage('write', 'Writing Report')

    def success(self, message: str):
        """Show success message and complete progress"""
        if self.progress:
            for stage in self.progress.stages:
                if self.progress.stages[stage]['status'] not in ['error', 'done', 'pending']:
                    self.progress.update_stage(stage, 'done')
        print(f"{Fore.GREEN}✨ {message}{Style.RESET_ALL}", file=self.stream)

    def error(self, message: str):
        """Show error and mark current stage as failed"""
        print(f"\n{Fore.RED}✗ {message}{Style.RESET_ALL}", file=self.stream)
        if self.progress and self.progress.current_stage:
            self.progress.update_stage(self.progress.current_stage, 'error')

    def show_report(self, report: Dict[str, Any]):
        """Tabulated summary of a report with a colored verdict"""
        verdict = report.get('pass')
        if verdict is not None:
            color = Fore.GREEN if verdict else Fore.RED
            title = f"{color}{'PASS' if verdict else 'FAIL'}{Style.RESET_ALL}"
        else:
            title = f"{Fore.CYAN}REPORT{Style.RESET_ALL}"
        print(f"\n{title} {report.get('experiment', '')}", file=self.stream)
        print(tabulate(report_rows(report), headers=['Field', 'Value'], tablefmt='simple'), file=self.stream)


class QuietDisplay(DisplayBase):
    """Minimal display for scripted runs"""

    def print(self, message: str):
        """Log without printing"""
        self.logger.debug(message)

    def success(self, message: str):
        """Log without printing"""
        self.logger.info(message)

    def warning(self, message: str):
        """Log without printing"""
        self.logger.warning(message)

    def error(self, message: str):
        """Log without printing"""
        self.logger.error(message)

    def update(self, stage: str, status: str = 'working', progress: int = None, details: str = None):
        """Silent update"""
        pass


@contextmanager
def create_display(quiet: bool = False, stream: Optional[TextIO] = None):
    """Create appropriate display handler"""
    display = None
    try:
        display = QuietDisplay(stream) if quiet else InteractiveDisplay(stream)
        yield display
    finally:
        if display is not None:
            display.finish()
