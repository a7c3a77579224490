"""Transport, framing, session orchestration, and the command line tool."""
