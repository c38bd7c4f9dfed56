#pragma once

#include <stdexcept>
#include <string>

namespace jetforge {

// Caller-side misuse: bad syntax, bad flags, mismatched shapes or fields.
class UsageError : public std::runtime_error {
public:
	explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Syntax error in a textual form; position is a 0-based byte offset.
class SyntaxError : public UsageError {
public:
	SyntaxError(const std::string& what, std::size_t position)
		: UsageError(what + " (at position " + std::to_string(position) + ")"),
		  m_position(position) {}

	std::size_t position() const { return m_position; }

private:
	std::size_t m_position;
};

// Mathematically well-posed request that must be refused: division by zero,
// resonance obstruction, insufficient truncation degree, and the like.
class MathError : public std::runtime_error {
public:
	explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace jetforge
