import os
import tempfile
import time
import unittest
from scispace.meu.lock import MeuLock
from scispace.utils.errors import LockHeld


class Test_meu_lock(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def test_exclusive(self):
        with MeuLock(self.root, holder="a") as lock:
            self.assertTrue(lock.held)
            with self.assertRaises(LockHeld):
                MeuLock(self.root, holder="b").acquire()
        self.assertFalse(os.path.exists(lock.path))
        with MeuLock(self.root, holder="b"):
            pass

    def test_stale_lock_taken_over(self):
        first = MeuLock(self.root, holder="crashed").acquire()
        with open(first.path, "w") as f:
            f.write("crashed {:d}\n".format(int((time.time() - 120) * 1000)))
        second = MeuLock(self.root, holder="b", stale_s=60).acquire()
        self.assertTrue(second.held)
        # the old holder must not remove a lock it no longer owns
        first.release()
        self.assertTrue(os.path.exists(second.path))
        second.release()
        self.assertFalse(os.path.exists(second.path))

    def test_half_written_lock_ages_by_mtime(self):
        lock = MeuLock(self.root, holder="b", stale_s=60)
        os.makedirs(os.path.dirname(lock.path))
        with open(lock.path, "w") as f:
            f.write("garbage")
        with self.assertRaises(LockHeld):
            lock.acquire()
        old = time.time() - 600
        os.utime(lock.path, (old, old))
        lock.acquire()
        self.assertTrue(lock.held)
        lock.release()


if __name__ == "__main__":
    unittest.main()
