import os
import json
import hashlib
import logging
from typing import Dict, Optional


class ReportHashLedger:
    """Tracks SHA-256 digests of serialized reports.

    Each experiment plan is keyed by its canonical parameter string. Re-running a
    plan with the same seed must reproduce the same report bytes; a changed
    digest is reported as drift so reproducibility regressions are caught
    between runs and machines.
    """

    def __init__(self, cache_path: str, quiet: bool = False):
        """
        Initialize ReportHashLedger

        Args:
            cache_path: JSON file holding {plan key: digest}
            quiet: Suppress info logging
        """
        self.logger = logging.getLogger(__name__)
        self.quiet = quiet
        self.cache_path = cache_path
        self.report_hashes = self._load_hashes()

        if not self.quiet:
            self.logger.info(f"Loaded {len(self.report_hashes)} report hashes from {self.cache_path}")

    def _load_hashes(self) -> Dict[str, str]:
        """Load existing report hashes from cache"""
        try:
            if os.path.exists(self.cache_path):
                with open(self.cache_path, 'r') as f:
                    return json.load(f)
        except (IOError, json.JSONDecodeError) as e:
            self.logger.error(f"Could not load hash ledger: {e}")

        return {}

    def _save_hashes(self):
        """Save current report hashes to cache"""
        try:
            directory = os.path.dirname(self.cache_path)
            if directory:
                os.makedirs(directory, exist_ok=True)

            with open(self.cache_path, 'w') as f:
                json.dump(self.report_hashes, f, indent=2, sort_keys=True)
                f.write('\n')
            self.logger.debug(f"Saved {len(self.report_hashes)} report hashes")
        except IOError as e:
            self.logger.error(f"Could not save hash ledger: {e}")

    @staticmethod
    def calculate_hash(payload: bytes) -> str:
        """SHA-256 of serialized report bytes"""
        return hashlib.sha256(payload).hexdigest()

    def check(self, plan_key: str, payload: bytes) -> Optional[bool]:
        """Compare a report against the recorded digest.

        Args:
            plan_key: Canonical plan identifier
            payload: Serialized report bytes

        Returns:
            None for a plan seen the first time, True if the digest matches,
            False on drift
        """
        current_hash = self.calculate_hash(payload)
        cached = self.report_hashes.get(plan_key)
        if cached is None:
            return None

        matches = cached == current_hash
        if not matches:
            self.logger.warning(
                f"Report drift for {plan_key} (Current hash: {current_hash}, Cached hash: {cached})"
            )
        return matches

    def record(self, plan_key: str, payload: bytes) -> str:
        """Store the digest of a report and persist the ledger"""
        current_hash = self.calculate_hash(payload)
        self.report_hashes[plan_key] = current_hash
        self._save_hashes()
        if not self.quiet:
            self.logger.info(f"Recorded report {plan_key} with hash {current_hash}")
        return current_hash

    def clear_cache(self):
        """Clear the hash ledger"""
        self.report_hashes = {}
        self._save_hashes()
        self.logger.info("Cleared hash ledger")
