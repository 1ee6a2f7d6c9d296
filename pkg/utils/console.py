"""Console banners for the verify command and the test runner."""

WIDTH = 80


def print_header(message: str) -> None:
    print("\n" + "=" * WIDTH)
    print(f" {message} ".center(WIDTH, "="))
    print("=" * WIDTH + "\n")


def print_section(message: str) -> None:
    print("\n" + "-" * (WIDTH // 2))
    print(f" {message} ")
    print("-" * (WIDTH // 2) + "\n")
