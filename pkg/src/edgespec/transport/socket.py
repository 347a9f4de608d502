"""Length-prefixed frame transport over asyncio TCP streams.

Each message is a 4-byte little-endian length followed by that many bytes.
A zero-length message marks the orderly end of a session.
"""

import asyncio
import logging
import struct
from typing import Optional, Tuple

from ..exceptions import DigestMismatch, PeerClosed

logger = logging.getLogger(__name__)

LENGTH_PREFIX = struct.Struct("<I")


def parse_address(addr: str) -> Tuple[str, int]:
    """Split HOST:PORT; the host defaults to loopback."""
    host, sep, port = addr.rpartition(":")
    if not sep:
        raise ValueError(f"address {addr!r} is not HOST:PORT")
    return host or "127.0.0.1", int(port)


class FrameEndpoint:
    """One side of an ordered, reliable message stream."""

    def __init__(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        self.reader = reader
        self.writer = writer
        self.closed = False

    def send(self, data: bytes) -> None:
        """Queue one message; does not wait for the socket buffer to drain."""
        if self.closed:
            raise PeerClosed("endpoint already closed")
        self.writer.write(LENGTH_PREFIX.pack(len(data)) + data)

    def send_end(self) -> None:
        self.send(b"")

    async def drain(self) -> None:
        try:
            await self.writer.drain()
        except (ConnectionResetError, BrokenPipeError) as e:
            raise PeerClosed(str(e)) from e

    async def recv(self) -> Optional[bytes]:
        """Next message, or None on the orderly end marker."""
        try:
            prefix = await self.reader.readexactly(LENGTH_PREFIX.size)
            (length,) = LENGTH_PREFIX.unpack(prefix)
            if length == 0:
                return None
            return await self.reader.readexactly(length)
        except asyncio.IncompleteReadError as e:
            raise PeerClosed("peer closed the stream mid-session") from e
        except ConnectionResetError as e:
            raise PeerClosed(str(e)) from e

    async def close(self) -> None:
        if self.closed:
            return
        self.closed = True
        self.writer.close()
        try:
            await self.writer.wait_closed()
        except (ConnectionResetError, BrokenPipeError):
            pass


async def handshake(endpoint: FrameEndpoint, digest: bytes) -> None:
    """Exchange config digests; both ends abort on mismatch."""
    endpoint.send(digest)
    await endpoint.drain()
    theirs = await endpoint.recv()
    if theirs != digest:
        logger.warning("handshake digest mismatch: ours %s, theirs %s", digest.hex(), (theirs or b"").hex())
        await endpoint.close()
        raise DigestMismatch("peer loaded a different scenario")


class Listener:
    """Accepts exactly one peer connection."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self.host = host
        self.port = port
        self._server: Optional[asyncio.AbstractServer] = None
        self._accepted: Optional[asyncio.Future] = None

    async def start(self) -> "Listener":
        loop = asyncio.get_running_loop()
        self._accepted = loop.create_future()

        def on_connect(reader, writer):
            if self._accepted.done():
                writer.close()
                return
            self._accepted.set_result(FrameEndpoint(reader, writer))

        self._server = await asyncio.start_server(on_connect, self.host, self.port)
        self.port = self._server.sockets[0].getsockname()[1]
        logger.info("listening on %s:%d", self.host, self.port)
        return self

    async def accept(self) -> FrameEndpoint:
        endpoint = await self._accepted
        self._server.close()
        await self._server.wait_closed()
        return endpoint


async def connect(host: str, port: int) -> FrameEndpoint:
    """Connect to a listening cloud; raises ConnectionRefusedError if none."""
    reader, writer = await asyncio.open_connection(host, port)
    return FrameEndpoint(reader, writer)


async def socket_transport(role: str, address: str) -> FrameEndpoint:
    """Open the byte-stream endpoint for an edge (connect) or cloud (listen) role."""
    host, port = parse_address(address)
    if role == "cloud":
        listener = await Listener(host, port).start()
        return await listener.accept()
    if role == "edge":
        return await connect(host, port)
    raise ValueError(f"unknown role {role!r}")
