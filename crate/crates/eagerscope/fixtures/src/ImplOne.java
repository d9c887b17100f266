public class ImplOne extends Base {

    public ImplOne() {
    }
}
