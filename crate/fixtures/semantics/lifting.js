// outcome: value
function foo() {
  if (true) { var x = 10 }
  return x }

print(foo());

function bar(x) {
  return function() {
    var x = x;
    return x }}

print(bar(200)());
