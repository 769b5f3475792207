#!/usr/bin/env python3
"""
modtrace test runner
Runs every test module through pytest and writes a summary to test_results.json

    python test/run_all_tests.py          # slow 표시 테스트 포함
    python test/run_all_tests.py --fast   # slow 제외
"""
import argparse
import json
import subprocess
import sys
import time
from datetime import datetime
from pathlib import Path

TEST_FILES = [
    "test_series.py",
    "test_hecke.py",
    "test_lifts.py",
    "test_qforms.py",
    "test_lvalues.py",
    "test_numeval.py",
    "test_traces.py",
    "test_borcherds.py",
    "test_cli.py",
    "test_service.py",
]


class ModtraceTestRunner:
    def __init__(self, fast: bool = False, timeout: int = 900):
        self.test_dir = Path(__file__).parent
        self.fast = fast
        self.timeout = timeout
        self.results = {}
        self.start_time = None
        self.end_time = None

    def run_test_file(self, test_file: Path):
        test_name = test_file.stem
        print(f"\n🧪 Running {test_name}...")
        command = [sys.executable, "-m", "pytest", str(test_file), "-c", str(self.test_dir / "pytest.ini"), "-q"]
        if self.fast:
            command += ["-m", "not slow"]

        start = time.time()
        try:
            result = subprocess.run(command, capture_output=True, text=True, timeout=self.timeout, cwd=self.test_dir.parent)
            duration = time.time() - start
            # pytest: 0 통과, 5 수집된 테스트 없음 (--fast 에서 전부 slow 인 경우)
            status = "PASSED" if result.returncode in (0, 5) else "FAILED"
            self.results[test_name] = {
                "status": status,
                "duration": duration,
                "stdout": result.stdout,
                "stderr": result.stderr,
                "return_code": result.returncode,
            }
            print(f"{'✅' if status == 'PASSED' else '❌'} {test_name} {status} ({duration:.2f}s)")
        except subprocess.TimeoutExpired:
            self.results[test_name] = {
                "status": "TIMEOUT",
                "duration": float(self.timeout),
                "stdout": "",
                "stderr": f"timed out after {self.timeout} seconds",
                "return_code": -1,
            }
            print(f"⏰ {test_name} TIMEOUT ({self.timeout}s)")

    def run_all_tests(self):
        print("🚀 Starting modtrace test suite...")
        self.start_time = datetime.now()
        for name in TEST_FILES:
            test_file = self.test_dir / name
            if test_file.exists():
                self.run_test_file(test_file)
            else:
                print(f"⚠️  Test file not found: {name}")
                self.results[test_file.stem] = {
                    "status": "NOT_FOUND", "duration": 0.0, "stdout": "", "stderr": "", "return_code": -1,
                }
        self.end_time = datetime.now()

    def generate_report(self) -> bool:
        total_duration = (self.end_time - self.start_time).total_seconds()
        counts = {}
        for r in self.results.values():
            counts[r["status"]] = counts.get(r["status"], 0) + 1
        total = len(self.results)
        passed = counts.get("PASSED", 0)

        print(f"\n{'=' * 60}")
        print("📊 MODTRACE TEST RESULTS SUMMARY")
        print(f"{'=' * 60}")
        print(f"🕐 Total Runtime: {total_duration:.2f}s")
        print(f"📁 Total Test Modules: {total}")
        print(f"✅ Passed: {passed}")
        print(f"❌ Failed: {counts.get('FAILED', 0)}")
        print(f"⏰ Timeout: {counts.get('TIMEOUT', 0)}")
        print(f"🔍 Not Found: {counts.get('NOT_FOUND', 0)}")
        print(f"📈 Success Rate: {(passed / total) * 100 if total else 0:.1f}%")

        for name, result in self.results.items():
            if result["status"] in ("FAILED", "TIMEOUT"):
                print(f"\n❌ {name}:")
                tail = (result["stdout"] or result["stderr"]).strip().splitlines()[-15:]
                for line in tail:
                    print(f"   {line}")

        report_file = self.test_dir / "test_results.json"
        with open(report_file, "w") as f:
            json.dump({
                "timestamp": self.start_time.isoformat(),
                "total_duration": total_duration,
                "fast": self.fast,
                "summary": {"total": total, **counts},
                "results": self.results,
            }, f, indent=2, default=str)
        print(f"\n💾 Detailed report saved to: {report_file}")
        return passed == total


def main():
    parser = argparse.ArgumentParser(description="run the modtrace test modules")
    parser.add_argument("--fast", action="store_true", help="skip tests marked slow")
    args = parser.parse_args()

    runner = ModtraceTestRunner(fast=args.fast)
    runner.run_all_tests()
    if runner.generate_report():
        print("\n🎉 All tests passed successfully!")
        sys.exit(0)
    print("\n❌ Some tests failed. Check the report above for details.")
    sys.exit(1)


if __name__ == "__main__":
    main()
