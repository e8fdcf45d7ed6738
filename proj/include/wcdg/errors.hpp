// Copyright 2026 The wcdg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace wcdg {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed grammar or lexicon text. line is 1-based, 0 when unknown.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A file could not be opened or read.
class IoError : public Error {
 public:
  using Error::Error;
};

class UndeclaredLabel : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class PfOutOfRange : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

// A constraint reads a layer-specific accessor on a relation of the other
// layer, e.g. semlab(X) where X is syntactic.
class AccessorScopeError : public Error {
 public:
  using Error::Error;
};

class UnknownCategory : public Error {
 public:
  using Error::Error;
};

class EmptySentence : public Error {
 public:
  EmptySentence() : Error("sentence has no tokens") {}
};

class LastCandidate : public Error {
 public:
  using Error::Error;
};

class IncompleteAssignment : public Error {
 public:
  using Error::Error;
};

class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace wcdg
