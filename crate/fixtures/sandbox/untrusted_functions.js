// outcome: certified
// The wrapper admits only primitive string keys, so a numeric index
// reads undefined until it is converted.
function Counter() { this.n = 0 }
Counter.prototype.inc = function() { this.n = this.n + 1; return this.n };
var c = new Counter();
c.inc();
print(c.inc());
var xs = [3, 4];
print(xs[0]);
var total = 0;
for (var i = 0; i < xs.length; i++) { total += xs["" + i] }
print(total);
