// Copyright 2026 The triplescore Authors.
//
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

#ifndef TRIPLESCORE_ERROR_HPP_
#define TRIPLESCORE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace triplescore {

// Errors caused by bad input files or arguments. The CLI maps these to
// exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Errors raised while fitting or evaluating a model. Exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public InputError {
 public:
  explicit IoError(const std::string &path, const std::string &what)
      : InputError(path + ": " + what), path_(path) {}
  const std::string &path() const { return path_; }

 private:
  std::string path_;
};

// A line in a text input that does not follow its format.
class MalformedLine : public InputError {
 public:
  MalformedLine(const std::string &source, std::size_t line_no,
                const std::string &what)
      : InputError(source + ":" + std::to_string(line_no) + ": " + what),
        line_no_(line_no) {}
  std::size_t line_no() const { return line_no_; }

 private:
  std::size_t line_no_;
};

class MalformedRecord : public MalformedLine {
 public:
  using MalformedLine::MalformedLine;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class DuplicateKey : public InputError {
 public:
  explicit DuplicateKey(const std::string &key)
      : InputError("duplicate key: " + key), key_(key) {}
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

class DuplicatePerson : public InputError {
 public:
  explicit DuplicatePerson(const std::string &key)
      : InputError("duplicate person: " + key), key_(key) {}
  const std::string &key() const { return key_; }

 private:
  std::string key_;
};

class RelationMismatch : public InputError {
 public:
  using InputError::InputError;
};

class EmptyUniverse : public InputError {
 public:
  EmptyUniverse() : InputError("object universe is empty") {}
};

class EmptyTrainingSet : public InputError {
 public:
  EmptyTrainingSet() : InputError("training set is empty") {}
};

class EmptyInput : public InputError {
 public:
  EmptyInput() : InputError("no scored pairs to evaluate") {}
};

class TooFewEntities : public InputError {
 public:
  using InputError::InputError;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ZeroVector : public std::domain_error {
 public:
  ZeroVector() : std::domain_error("cosine of a zero-norm vector") {}
};

class DegenerateLabels : public NumericError {
 public:
  DegenerateLabels()
      : NumericError("training labels contain fewer than two classes") {}
};

class NonFinite : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace triplescore

#endif  // TRIPLESCORE_ERROR_HPP_
