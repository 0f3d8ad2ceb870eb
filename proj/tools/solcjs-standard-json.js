#!/usr/bin/env node
// Copyright 2026 The Muse Authors
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

// Presents an npm `solc` package as a native solc binary:
//   node solcjs-standard-json.js <path/to/node_modules/solc> --version
//   node solcjs-standard-json.js <path/to/node_modules/solc> --standard-json
//   node solcjs-standard-json.js <path/to/node_modules/solc> <files...>
//       --combined-json <fields> [--optimize] [--allow-paths <p>]
// The combined-json form is what static analyzers expect from solc.

'use strict';

const fs = require('fs');
const path = require('path');

const [modulePath, ...args] = process.argv.slice(2);
if (!modulePath || args.length === 0) {
  process.stderr.write('usage: solcjs-standard-json.js <solc-module> ' +
                       '--version|--standard-json|<files> --combined-json ' +
                       '<fields>\n');
  process.exit(2);
}
const solc = require(path.resolve(modulePath));

// Blocking write: process.exit() would drop buffered pipe output.
function emit(text) {
  const buf = Buffer.from(text, 'utf8');
  let off = 0;
  while (off < buf.length) {
    try {
      off += fs.writeSync(1, buf, off, buf.length - off);
    } catch (e) {
      if (e.code !== 'EAGAIN') throw e;
    }
  }
}

function compile(input) {
  const text = JSON.stringify(input);
  const options = {import: readImport};
  const output = solc.compileStandardWrapper
                     ? solc.compileStandardWrapper(text, readImport)
                     : solc.compile(text, options);
  return output;
}

function readImport(importPath) {
  try {
    return {contents: fs.readFileSync(importPath, 'utf8')};
  } catch (e) {
    return {error: 'file not found: ' + importPath};
  }
}

function parseJson(text) {
  return JSON.parse(text.slice(text.indexOf('{')));
}

if (args.includes('--version')) {
  emit('solc, the solidity compiler commandline interface\n' +
                       'Version: ' + solc.version() + '\n');
  process.exit(0);
}

if (args.includes('--standard-json')) {
  const input = fs.readFileSync(0, 'utf8');
  const output = solc.compileStandardWrapper
                     ? solc.compileStandardWrapper(input)
                     : solc.compile(input);
  emit(output);
  process.exit(0);
}

const withValue = new Set(['--combined-json', '--allow-paths', '--base-path',
                           '--include-path', '--evm-version',
                           '--optimize-runs']);
const files = [];
const flags = {};
for (let i = 0; i < args.length; ++i) {
  if (withValue.has(args[i])) {
    flags[args[i]] = args[++i];
  } else if (args[i].startsWith('--')) {
    flags[args[i]] = true;
  } else {
    files.push(args[i]);
  }
}
if (!flags['--combined-json'] || files.length === 0) {
  process.stderr.write('unsupported arguments: ' + args.join(' ') + '\n');
  process.exit(2);
}

const sources = {};
for (const file of files) {
  sources[file] = {content: fs.readFileSync(file, 'utf8')};
}
const settings = {
  optimizer: {enabled: Boolean(flags['--optimize']),
              runs: Number(flags['--optimize-runs'] || 200)},
  outputSelection: {
    '*': {
      '*': ['abi', 'evm.bytecode.object', 'evm.bytecode.sourceMap',
            'evm.deployedBytecode.object', 'evm.deployedBytecode.sourceMap',
            'evm.methodIdentifiers', 'userdoc', 'devdoc'],
      '': ['ast'],
    },
  },
};
const output = parseJson(compile({language: 'Solidity', sources, settings}));
let failed = false;
for (const error of output.errors || []) {
  process.stderr.write((error.formattedMessage || error.message) + '\n');
  if (error.severity === 'error') failed = true;
}
if (failed) process.exit(1);

// Before 0.8 the combined-json form encodes abi and natspec as strings.
const legacy = Number(solc.version().split('.')[1]) < 8;
const encode = (value) => (legacy ? JSON.stringify(value) : value);
const combined = {contracts: {}, sources: {}, version: solc.version()};
for (const [file, contracts] of Object.entries(output.contracts || {})) {
  for (const [name, c] of Object.entries(contracts)) {
    combined.contracts[file + ':' + name] = {
      'abi': encode(c.abi),
      'bin': c.evm.bytecode.object,
      'bin-runtime': c.evm.deployedBytecode.object,
      'srcmap': c.evm.bytecode.sourceMap,
      'srcmap-runtime': c.evm.deployedBytecode.sourceMap,
      'hashes': c.evm.methodIdentifiers,
      'userdoc': encode(c.userdoc),
      'devdoc': encode(c.devdoc),
    };
  }
}
for (const [file, source] of Object.entries(output.sources || {})) {
  combined.sources[file] = {AST: source.ast, id: source.id};
}
combined.sourceList = Object.keys(output.sources || {});
emit(JSON.stringify(combined) + '\n');
